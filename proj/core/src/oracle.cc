#include "dshap/oracle.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <unordered_map>

#include "dshap/error.h"

namespace dshap {
namespace {

void guard(std::size_t n, std::size_t limit, const char* what) {
  if (n > limit) {
    throw Error(ErrorCode::kTooLarge,
                std::string(what) + " over " + std::to_string(n) + " features exceeds the limit of " +
                    std::to_string(limit));
  }
}

void check_space(const Classifier& m, const FeatureSpace& other) {
  if (!(m.space() == other)) throw Error(ErrorCode::kDomainMismatch, "feature spaces differ");
}

// Visits every assignment of `free` (last one fastest), other features taken
// from `values`.
template <typename Visit>
void enumerate(const FeatureSpace& space, const std::vector<FeatureId>& free, std::vector<ValueId> values,
               Visit&& visit) {
  for (auto f : free) values[f] = 0;
  while (true) {
    visit(std::span<const ValueId>(values));
    std::size_t i = free.size();
    while (i > 0) {
      const auto f = free[i - 1];
      if (++values[f] < space.domain_size(f)) break;
      values[f] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

std::vector<FeatureId> all_features(const FeatureSpace& space) {
  std::vector<FeatureId> out(space.size());
  std::iota(out.begin(), out.end(), FeatureId{0});
  return out;
}

std::uint64_t mask_of(const FeatureSet& s) {
  std::uint64_t mask = 0;
  for (auto f : s.members()) mask |= std::uint64_t{1} << f;
  return mask;
}

void require_binary(const FeatureSpace& space) {
  if (!space.all_binary()) throw Error(ErrorCode::kDomainMismatch, "counting needs binary features");
}

}  // namespace

Classifier Classifier::from_circuit(Circuit c) {
  auto shared = std::make_shared<const Circuit>(std::move(c));
  return Classifier(shared->space_ptr(), [shared](std::span<const ValueId> v) { return shared->evaluate(v); });
}

Classifier Classifier::negated() const {
  return Classifier(space_, [fn = fn_](std::span<const ValueId> v) { return !fn(v); });
}

Rational phi_expected(const Classifier& m, const ProductDistribution& p, const Entity& e, const FeatureSet& s) {
  check_space(m, p.space());
  check_space(m, e.space());
  std::vector<FeatureId> free;
  for (FeatureId f = 0; f < m.space().size(); ++f) {
    if (!s.contains(f)) free.push_back(f);
  }
  guard(free.size(), kMaxPhiFreeFeatures, "phi");
  std::vector<ValueId> start(e.values().begin(), e.values().end());
  Rational total = 0;
  Rational weight;
  enumerate(m.space(), free, start, [&](std::span<const ValueId> v) {
    if (!m(v)) return;
    weight = 1;
    for (auto f : free) weight *= p.probability(f, v[f]);
    total += weight;
  });
  return total;
}

PhiTable::PhiTable(const Classifier& m, const ProductDistribution& p, const Entity& e) : n_(m.space().size()) {
  check_space(m, p.space());
  check_space(m, e.space());
  guard(n_, kMaxSubsetFeatures, "phi table");
  const auto& space = m.space();
  // Row-major over features, feature 0 most significant.
  std::vector<std::size_t> dims(n_);
  std::size_t size = 1;
  for (FeatureId f = 0; f < n_; ++f) {
    dims[f] = space.domain_size(f);
    size *= dims[f];
  }
  std::vector<Rational> table;
  table.reserve(size);
  enumerate(space, all_features(space), std::vector<ValueId>(n_, 0),
            [&](std::span<const ValueId> v) { table.emplace_back(m(v) ? 1 : 0); });

  for (FeatureId f = 0; f < n_; ++f) {
    std::size_t outer = 1, inner = 1;
    for (FeatureId g = 0; g < f; ++g) outer *= dims[g];
    for (FeatureId g = f + 1; g < n_; ++g) inner *= dims[g];
    const std::size_t d = dims[f];
    std::vector<Rational> next(outer * 2 * inner);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t i = 0; i < inner; ++i) {
        Rational marginal = 0;
        for (std::size_t v = 0; v < d; ++v) marginal += p.probability(f, static_cast<ValueId>(v)) * table[(o * d + v) * inner + i];
        next[(o * 2 + 0) * inner + i] = std::move(marginal);
        next[(o * 2 + 1) * inner + i] = table[(o * d + e[f]) * inner + i];
      }
    }
    dims[f] = 2;
    table = std::move(next);
  }
  // Position of a subset in `table` has feature 0 as the most significant bit;
  // re-index so bit f of the mask is feature f.
  values_.resize(table.size());
  for (std::uint64_t pos = 0; pos < table.size(); ++pos) {
    std::uint64_t mask = 0;
    for (std::size_t f = 0; f < n_; ++f) {
      if ((pos >> (n_ - 1 - f)) & 1U) mask |= std::uint64_t{1} << f;
    }
    values_[mask] = std::move(table[pos]);
  }
}

const Rational& PhiTable::operator()(const FeatureSet& s) const { return values_[mask_of(s)]; }

std::vector<Rational> shap_bruteforce_subsets_all(const Classifier& m, const ProductDistribution& p,
                                                  const Entity& e) {
  const std::size_t n = m.space().size();
  guard(n, kMaxSubsetFeatures, "subset SHAP");
  const PhiTable phi(m, p, e);
  const auto weights = shapley_weights(n);
  std::vector<Rational> scores(n, Rational(0));
  for (FeatureId x = 0; x < n; ++x) {
    const std::uint64_t bit = std::uint64_t{1} << x;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      if (s & bit) continue;
      scores[x] += weights[static_cast<std::size_t>(std::popcount(s))] * (phi(s | bit) - phi(s));
    }
  }
  return scores;
}

Rational shap_bruteforce_subsets(const Classifier& m, const ProductDistribution& p, const Entity& e, FeatureId x) {
  m.space().check_feature(x);
  const std::size_t n = m.space().size();
  guard(n, kMaxSubsetFeatures, "subset SHAP");
  const PhiTable phi(m, p, e);
  const auto weights = shapley_weights(n);
  const std::uint64_t bit = std::uint64_t{1} << x;
  Rational score = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (s & bit) continue;
    score += weights[static_cast<std::size_t>(std::popcount(s))] * (phi(s | bit) - phi(s));
  }
  return score;
}

Rational shap_bruteforce_permutations(const Classifier& m, const ProductDistribution& p, const Entity& e,
                                      FeatureId x) {
  m.space().check_feature(x);
  const std::size_t n = m.space().size();
  guard(n, kMaxPermutationFeatures, "permutation SHAP");
  std::unordered_map<std::uint64_t, Rational> cache;
  auto phi = [&](std::uint64_t mask) -> const Rational& {
    auto it = cache.find(mask);
    if (it != cache.end()) return it->second;
    FeatureSet s(n);
    for (FeatureId f = 0; f < n; ++f) {
      if ((mask >> f) & 1U) s.insert(f);
    }
    return cache.emplace(mask, phi_expected(m, p, e, s)).first->second;
  };
  std::vector<FeatureId> perm = all_features(m.space());
  Rational total = 0;
  std::uint64_t count = 0;
  do {
    std::uint64_t before = 0;
    for (auto f : perm) {
      if (f == x) break;
      before |= std::uint64_t{1} << f;
    }
    total += phi(before | (std::uint64_t{1} << x)) - phi(before);
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  total /= count;
  return total;
}

BigInt ssat(const Classifier& m, const FeatureSet& s) {
  require_binary(m.space());
  std::vector<FeatureId> free;
  std::vector<ValueId> start(m.space().size(), 0);
  for (FeatureId f = 0; f < m.space().size(); ++f) {
    if (s.contains(f)) {
      start[f] = 1;
    } else {
      free.push_back(f);
    }
  }
  guard(free.size(), kMaxCountFeatures, "ssat");
  std::uint64_t count = 0;
  enumerate(m.space(), free, start, [&](std::span<const ValueId> v) { count += m(v) ? 1 : 0; });
  return BigInt(static_cast<unsigned long>(count));
}

BigInt model_count(const Classifier& m) { return ssat(m, FeatureSet(m.space().size())); }

Rational expected_value(const Classifier& m, const ProductDistribution& p) {
  check_space(m, p.space());
  guard(m.space().size(), kMaxCountFeatures, "expected value");
  Rational total = 0;
  Rational weight;
  enumerate(m.space(), all_features(m.space()), std::vector<ValueId>(m.space().size(), 0),
            [&](std::span<const ValueId> v) {
              if (!m(v)) return;
              weight = 1;
              for (FeatureId f = 0; f < v.size(); ++f) weight *= p.probability(f, v[f]);
              total += weight;
            });
  return total;
}

Rational bruteforce_H(const Classifier& m, const ProductDistribution& p, const Entity& e, std::size_t k) {
  const std::size_t n = m.space().size();
  if (k > n) throw Error(ErrorCode::kIndexOutOfRange, "k exceeds |X|");
  const PhiTable phi(m, p, e);
  Rational total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (static_cast<std::size_t>(std::popcount(s)) == k) total += phi(s);
  }
  return total;
}

}  // namespace dshap
