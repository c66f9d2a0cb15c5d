#ifndef DSHAP_RATIONAL_H_
#define DSHAP_RATIONAL_H_

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dshap {

using Rational = mpq_class;
using BigInt = mpz_class;

// Canonical "p/q" text, lowest terms, q > 0 (integers print as "p/1").
std::string to_fraction_string(const Rational& value);

// Accepts "p/q" or "p"; throws Error(kBadFraction) otherwise or when q = 0.
Rational parse_fraction(std::string_view text);

Rational make_rational(long numerator, long denominator = 1);
// num/den in canonical form; den must be nonzero.
Rational fraction(const BigInt& num, const BigInt& den);

BigInt binomial(unsigned n, unsigned k);

// Weights k!(n-k-1)!/n! for k = 0..n-1, built by running products.
std::vector<Rational> shapley_weights(std::size_t n);

// Pascal triangle rows 0..max_n, row i has i+1 entries.
class BinomialTable {
 public:
  explicit BinomialTable(std::size_t max_n);

  const BigInt& operator()(std::size_t n, std::size_t k) const { return rows_[n][k]; }
  const std::vector<BigInt>& row(std::size_t n) const { return rows_[n]; }
  std::size_t max_n() const { return rows_.size() - 1; }

 private:
  std::vector<std::vector<BigInt>> rows_;
};

}  // namespace dshap

#endif  // DSHAP_RATIONAL_H_
