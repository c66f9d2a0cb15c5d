#include "dshap/rational.h"

#include <cctype>

#include "dshap/error.h"

namespace dshap {

std::string to_fraction_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  return BigInt(std::string(s), 10);
}

}  // namespace

Rational parse_fraction(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-' || den.front() == '+') {
    throw Error(ErrorCode::kBadFraction, "not a fraction: '" + std::string(text) + "'");
  }
  BigInt q = parse_integer(den);
  if (q == 0) throw Error(ErrorCode::kBadFraction, "zero denominator: '" + std::string(text) + "'");
  Rational r(parse_integer(num), q);
  r.canonicalize();
  return r;
}

Rational make_rational(long numerator, long denominator) {
  Rational r(numerator, denominator);
  r.canonicalize();
  return r;
}

Rational fraction(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<Rational> shapley_weights(std::size_t n) {
  std::vector<Rational> w;
  if (n == 0) return w;
  w.reserve(n);
  w.emplace_back(1, n);  // (n-1)!/n!
  for (std::size_t k = 0; k + 1 < n; ++k) {
    w.push_back(w.back() * fraction(BigInt(k + 1), BigInt(n - k - 1)));
  }
  return w;
}

BinomialTable::BinomialTable(std::size_t max_n) : rows_(max_n + 1) {
  for (std::size_t n = 0; n <= max_n; ++n) {
    rows_[n].resize(n + 1);
    rows_[n][0] = 1;
    rows_[n][n] = 1;
    for (std::size_t k = 1; k < n; ++k) rows_[n][k] = rows_[n - 1][k - 1] + rows_[n - 1][k];
  }
}

}  // namespace dshap
