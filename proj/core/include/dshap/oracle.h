#ifndef DSHAP_ORACLE_H_
#define DSHAP_ORACLE_H_

#include <functional>
#include <span>
#include <vector>

#include "dshap/circuit.h"
#include "dshap/rational.h"

namespace dshap {

// Any total Boolean function over the entities of a feature space.
class Classifier {
 public:
  using Fn = std::function<bool(std::span<const ValueId>)>;

  Classifier(SpacePtr space, Fn fn) : space_(std::move(space)), fn_(std::move(fn)) {}

  static Classifier from_circuit(Circuit c);

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }

  bool operator()(std::span<const ValueId> values) const { return fn_(values); }
  bool operator()(const Entity& e) const { return fn_(e.values()); }

  Classifier negated() const;

 private:
  SpacePtr space_;
  Fn fn_;
};

inline constexpr std::size_t kMaxPhiFreeFeatures = 24;
inline constexpr std::size_t kMaxSubsetFeatures = 20;
inline constexpr std::size_t kMaxPermutationFeatures = 8;
inline constexpr std::size_t kMaxCountFeatures = 24;

// E[M(e') | e' agrees with e on S] under the product distribution, by
// enumerating the completions of e|S.
Rational phi_expected(const Classifier& m, const ProductDistribution& p, const Entity& e, const FeatureSet& s);

// phi for every subset S of X, computed from the full truth table by
// replacing one feature axis at a time with (marginalized, fixed to e).
class PhiTable {
 public:
  PhiTable(const Classifier& m, const ProductDistribution& p, const Entity& e);

  const Rational& operator()(std::uint64_t subset_mask) const { return values_[subset_mask]; }
  const Rational& operator()(const FeatureSet& s) const;
  std::size_t feature_count() const { return n_; }

 private:
  std::size_t n_;
  std::vector<Rational> values_;  // indexed by mask, bit f set iff f in S
};

Rational shap_bruteforce_subsets(const Classifier& m, const ProductDistribution& p, const Entity& e, FeatureId x);
std::vector<Rational> shap_bruteforce_subsets_all(const Classifier& m, const ProductDistribution& p,
                                                  const Entity& e);

Rational shap_bruteforce_permutations(const Classifier& m, const ProductDistribution& p, const Entity& e,
                                      FeatureId x);

// Number of binary entities accepted by M with every feature of S set to 1.
BigInt ssat(const Classifier& m, const FeatureSet& s);
BigInt model_count(const Classifier& m);

Rational expected_value(const Classifier& m, const ProductDistribution& p);

// Sum over |S| = k of phi(S).
Rational bruteforce_H(const Classifier& m, const ProductDistribution& p, const Entity& e, std::size_t k);

}  // namespace dshap

#endif  // DSHAP_ORACLE_H_
