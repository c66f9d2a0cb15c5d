#ifndef DSHAP_FEATURE_SPACE_H_
#define DSHAP_FEATURE_SPACE_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dshap/rational.h"

namespace dshap {

using FeatureId = std::uint32_t;
using ValueId = std::uint32_t;

// Ordered features with finite domains. Binary features have domain {"0","1"};
// value index 1 means "true".
class FeatureSpace {
 public:
  FeatureSpace() = default;

  static std::shared_ptr<const FeatureSpace> binary(const std::vector<std::string>& names);

  FeatureId add_feature(std::string name, std::vector<std::string> domain);
  FeatureId add_binary_feature(std::string name);

  std::size_t size() const { return names_.size(); }
  const std::string& name(FeatureId f) const { return names_.at(f); }
  const std::vector<std::string>& domain(FeatureId f) const { return domains_.at(f); }
  std::size_t domain_size(FeatureId f) const { return domains_.at(f).size(); }
  bool is_binary(FeatureId f) const;
  bool all_binary() const;

  std::optional<FeatureId> find(std::string_view name) const;
  // Throws Error(kUnknownFeature).
  FeatureId id(std::string_view name) const;
  std::optional<ValueId> find_value(FeatureId f, std::string_view value) const;
  // Throws Error(kValueOutOfDomain).
  ValueId value_id(FeatureId f, std::string_view value) const;
  void check_feature(FeatureId f) const;

  friend bool operator==(const FeatureSpace& a, const FeatureSpace& b) {
    return a.names_ == b.names_ && a.domains_ == b.domains_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> domains_;
  std::unordered_map<std::string, FeatureId> index_;
};

using SpacePtr = std::shared_ptr<const FeatureSpace>;

// Total assignment of domain value indices to features.
class Entity {
 public:
  Entity(SpacePtr space, std::vector<ValueId> values);

  // Binary shorthand: bits[i] is the value of feature i.
  static Entity binary(SpacePtr space, const std::vector<int>& bits);

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  ValueId operator[](FeatureId f) const { return values_[f]; }
  std::span<const ValueId> values() const { return values_; }
  Entity with(FeatureId f, ValueId v) const;
  // Flips every binary feature; used for polarity checks.
  Entity inverted() const;

  friend bool operator==(const Entity& a, const Entity& b) { return a.values_ == b.values_; }

 private:
  SpacePtr space_;
  std::vector<ValueId> values_;
};

// Independent per-feature marginals over the domain values.
class ProductDistribution {
 public:
  ProductDistribution(SpacePtr space, std::vector<std::vector<Rational>> marginals);

  static ProductDistribution uniform(SpacePtr space);
  // Binary shorthand: p1[i] is the probability that feature i is 1.
  static ProductDistribution binary(SpacePtr space, const std::vector<Rational>& p1);

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Rational& probability(FeatureId f, ValueId v) const { return marginals_[f][v]; }
  const std::vector<Rational>& marginal(FeatureId f) const { return marginals_[f]; }
  // Probability of value 1 for a binary feature.
  const Rational& p(FeatureId f) const { return marginals_[f][1]; }
  bool is_uniform() const;

 private:
  SpacePtr space_;
  std::vector<std::vector<Rational>> marginals_;
};

// Fixed-capacity feature bitset used for variable sets and oracle subsets.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::size_t capacity) : words_((capacity + 63) / 64, 0), capacity_(capacity) {}

  static FeatureSet of(std::size_t capacity, std::initializer_list<FeatureId> features);

  std::size_t capacity() const { return capacity_; }
  void insert(FeatureId f) { words_[f >> 6] |= std::uint64_t{1} << (f & 63); }
  void erase(FeatureId f) { words_[f >> 6] &= ~(std::uint64_t{1} << (f & 63)); }
  bool contains(FeatureId f) const { return (words_[f >> 6] >> (f & 63)) & 1U; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<FeatureId> members() const;

  FeatureSet& operator|=(const FeatureSet& other);
  bool intersects(const FeatureSet& other) const;
  bool is_subset_of(const FeatureSet& other) const;
  std::span<const std::uint64_t> words() const { return words_; }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
  std::size_t capacity_ = 0;
};

struct FeatureSetHash {
  std::size_t operator()(const FeatureSet& s) const noexcept;
};

}  // namespace dshap

#endif  // DSHAP_FEATURE_SPACE_H_
