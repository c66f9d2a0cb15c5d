#include "dshap/feature_space.h"

#include <bit>
#include <unordered_set>

#include "dshap/error.h"

namespace dshap {

SpacePtr FeatureSpace::binary(const std::vector<std::string>& names) {
  auto space = std::make_shared<FeatureSpace>();
  for (const auto& n : names) space->add_binary_feature(n);
  return space;
}

FeatureId FeatureSpace::add_feature(std::string name, std::vector<std::string> domain) {
  if (index_.count(name) != 0) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate feature '" + name + "'");
  }
  if (domain.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "feature '" + name + "' needs at least two values");
  }
  std::unordered_set<std::string> seen(domain.begin(), domain.end());
  if (seen.size() != domain.size()) {
    throw Error(ErrorCode::kInvalidArgument, "feature '" + name + "' has repeated domain values");
  }
  const auto id = static_cast<FeatureId>(names_.size());
  index_.emplace(name, id);
  names_.push_back(std::move(name));
  domains_.push_back(std::move(domain));
  return id;
}

FeatureId FeatureSpace::add_binary_feature(std::string name) {
  return add_feature(std::move(name), {"0", "1"});
}

bool FeatureSpace::is_binary(FeatureId f) const {
  const auto& d = domains_.at(f);
  return d.size() == 2 && d[0] == "0" && d[1] == "1";
}

bool FeatureSpace::all_binary() const {
  for (FeatureId f = 0; f < size(); ++f) {
    if (!is_binary(f)) return false;
  }
  return true;
}

std::optional<FeatureId> FeatureSpace::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FeatureId FeatureSpace::id(std::string_view name) const {
  if (auto f = find(name)) return *f;
  throw Error(ErrorCode::kUnknownFeature, "unknown feature '" + std::string(name) + "'");
}

std::optional<ValueId> FeatureSpace::find_value(FeatureId f, std::string_view value) const {
  const auto& d = domain(f);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] == value) return static_cast<ValueId>(i);
  }
  return std::nullopt;
}

ValueId FeatureSpace::value_id(FeatureId f, std::string_view value) const {
  if (auto v = find_value(f, value)) return *v;
  throw Error(ErrorCode::kValueOutOfDomain,
              "value '" + std::string(value) + "' not in domain of '" + name(f) + "'");
}

void FeatureSpace::check_feature(FeatureId f) const {
  if (f >= size()) throw Error(ErrorCode::kUnknownFeature, "feature id " + std::to_string(f));
}

Entity::Entity(SpacePtr space, std::vector<ValueId> values) : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->size()) {
    throw Error(ErrorCode::kMissingFeature, "entity must assign every feature");
  }
  for (FeatureId f = 0; f < values_.size(); ++f) {
    if (values_[f] >= space_->domain_size(f)) {
      throw Error(ErrorCode::kValueOutOfDomain, "entity value out of domain for '" + space_->name(f) + "'");
    }
  }
}

Entity Entity::binary(SpacePtr space, const std::vector<int>& bits) {
  std::vector<ValueId> values(bits.begin(), bits.end());
  return Entity(std::move(space), std::move(values));
}

Entity Entity::with(FeatureId f, ValueId v) const {
  auto values = values_;
  values.at(f) = v;
  return Entity(space_, std::move(values));
}

Entity Entity::inverted() const {
  auto values = values_;
  for (FeatureId f = 0; f < values.size(); ++f) {
    if (!space_->is_binary(f)) throw Error(ErrorCode::kNonBinaryCircuit, "cannot invert a non-binary feature");
    values[f] = 1 - values[f];
  }
  return Entity(space_, std::move(values));
}

ProductDistribution::ProductDistribution(SpacePtr space, std::vector<std::vector<Rational>> marginals)
    : space_(std::move(space)), marginals_(std::move(marginals)) {
  if (marginals_.size() != space_->size()) {
    throw Error(ErrorCode::kMissingFeature, "distribution must cover every feature");
  }
  for (FeatureId f = 0; f < marginals_.size(); ++f) {
    if (marginals_[f].size() != space_->domain_size(f)) {
      throw Error(ErrorCode::kDomainMismatch, "marginal of '" + space_->name(f) + "' has wrong arity");
    }
    Rational total = 0;
    for (auto& q : marginals_[f]) {
      q.canonicalize();
      if (q < 0 || q > 1) {
        throw Error(ErrorCode::kProbabilityOutOfRange, "probability outside [0,1] for '" + space_->name(f) + "'");
      }
      total += q;
    }
    if (total != 1) {
      throw Error(ErrorCode::kSumNotOne,
                  "marginal of '" + space_->name(f) + "' sums to " + to_fraction_string(total));
    }
  }
}

ProductDistribution ProductDistribution::uniform(SpacePtr space) {
  std::vector<std::vector<Rational>> m;
  m.reserve(space->size());
  for (FeatureId f = 0; f < space->size(); ++f) {
    const auto d = space->domain_size(f);
    m.emplace_back(d, Rational(1, d));
  }
  return ProductDistribution(std::move(space), std::move(m));
}

ProductDistribution ProductDistribution::binary(SpacePtr space, const std::vector<Rational>& p1) {
  if (p1.size() != space->size()) throw Error(ErrorCode::kMissingFeature, "one probability per feature");
  std::vector<std::vector<Rational>> m;
  m.reserve(p1.size());
  for (FeatureId f = 0; f < p1.size(); ++f) {
    if (!space->is_binary(f)) throw Error(ErrorCode::kDomainMismatch, "'" + space->name(f) + "' is not binary");
    m.push_back({Rational(1 - p1[f]), p1[f]});
  }
  return ProductDistribution(std::move(space), std::move(m));
}

bool ProductDistribution::is_uniform() const {
  for (FeatureId f = 0; f < marginals_.size(); ++f) {
    const Rational u(1, marginals_[f].size());
    for (const auto& q : marginals_[f]) {
      if (q != u) return false;
    }
  }
  return true;
}

FeatureSet FeatureSet::of(std::size_t capacity, std::initializer_list<FeatureId> features) {
  FeatureSet s(capacity);
  for (auto f : features) s.insert(f);
  return s;
}

std::size_t FeatureSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::vector<FeatureId> FeatureSet::members() const {
  std::vector<FeatureId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w != 0) {
      out.push_back(static_cast<FeatureId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w))));
      w &= w - 1;
    }
  }
  return out;
}

FeatureSet& FeatureSet::operator|=(const FeatureSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

bool FeatureSet::intersects(const FeatureSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

bool FeatureSet::is_subset_of(const FeatureSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

std::size_t FeatureSetHash::operator()(const FeatureSet& s) const noexcept {
  std::size_t h = s.capacity();
  for (auto w : s.words()) h = h * 0x9E3779B97F4A7C15ULL ^ (w + (h >> 7));
  return h;
}

}  // namespace dshap
