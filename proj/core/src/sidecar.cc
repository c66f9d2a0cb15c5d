#include "dshap/error.h"
#include "dshap/io.h"
#include "json_util.h"

namespace dshap {
namespace {

using detail::Json;
using detail::fraction_of;
using detail::value_text;

// Domain implied by a marginal entry: a single fraction means binary, an
// object lists values, an array indexes 0..k-1.
std::vector<std::string> implied_domain(const Json& m) {
  std::vector<std::string> out;
  if (m.is_object()) {
    for (const auto& [k, _] : m.items()) out.push_back(k);
    if (out.size() == 2 && out[0] == "1" && out[1] == "0") std::swap(out[0], out[1]);
  } else if (m.is_array()) {
    for (std::size_t i = 0; i < m.size(); ++i) out.push_back(std::to_string(i));
  } else {
    out = {"0", "1"};
  }
  return out;
}

std::vector<Rational> marginal_of(const FeatureSpace& space, FeatureId f, const Json& m) {
  const std::string& name = space.name(f);
  std::vector<Rational> out(space.domain_size(f), Rational(0));
  if (m.is_string() || m.is_number_integer()) {
    if (!space.is_binary(f)) {
      throw Error(ErrorCode::kBadFraction, "'" + name + "' is not binary; give one probability per value");
    }
    out[1] = fraction_of(m, name);
    out[0] = 1 - out[1];
    // Range is checked here since 1 - p hides p > 1 from the sum test.
    if (out[1] < 0 || out[1] > 1) {
      throw Error(ErrorCode::kProbabilityOutOfRange, "p(" + name + ") = " + to_fraction_string(out[1]));
    }
  } else if (m.is_array()) {
    if (m.size() != out.size()) {
      throw Error(ErrorCode::kDomainMismatch, "'" + name + "' has " + std::to_string(out.size()) + " values, " +
                                                  std::to_string(m.size()) + " probabilities given");
    }
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = fraction_of(m[i], name);
  } else if (m.is_object()) {
    std::vector<char> seen(out.size(), 0);
    for (const auto& [k, v] : m.items()) {
      const ValueId id = space.value_id(f, k);
      out[id] = fraction_of(v, name);
      seen[id] = 1;
    }
    for (ValueId v = 0; v < seen.size(); ++v) {
      if (!seen[v]) {
        throw Error(ErrorCode::kMissingFeature, "no probability for " + name + " = " + space.domain(f)[v]);
      }
    }
  } else {
    throw Error(ErrorCode::kBadFraction, "'" + name + "': unreadable marginal");
  }
  return out;
}

}  // namespace

SidecarSpec parse_sidecar(std::string_view text) {
  return detail::with_json_errors([&] {
    const Json doc = detail::parse_json(text);
    if (!doc.is_object()) throw ParseError(ErrorCode::kParseError, 1, "sidecar must be a JSON object");
    const bool structured = doc.contains("features") || doc.contains("marginals") || doc.contains("uniform") ||
                            doc.contains("entity");
    const Json marginals = structured ? doc.value("marginals", Json::object()) : doc;
    const bool uniform = structured && doc.value("uniform", false);

    auto space = std::make_shared<FeatureSpace>();
    if (structured && doc.contains("features")) {
      detail::add_declared_features(*space, doc["features"]);
    } else {
      for (const auto& [name, m] : marginals.items()) space->add_feature(name, implied_domain(m));
      if (structured && doc.contains("entity")) {
        for (const auto& [name, v] : doc["entity"].items()) {
          if (!space->find(name)) space->add_binary_feature(name);
        }
      }
    }
    if (!marginals.is_object()) throw ParseError(ErrorCode::kParseError, 0, "\"marginals\" must be an object");
    for (const auto& [name, _] : marginals.items()) space->id(name);

    std::vector<std::vector<Rational>> table;
    for (FeatureId f = 0; f < space->size(); ++f) {
      const std::string& name = space->name(f);
      if (marginals.contains(name)) {
        table.push_back(marginal_of(*space, f, marginals[name]));
      } else if (uniform) {
        table.emplace_back(space->domain_size(f), Rational(1, static_cast<unsigned long>(space->domain_size(f))));
      } else {
        throw Error(ErrorCode::kMissingFeature, "no marginal for '" + name + "'");
      }
    }
    SpacePtr shared = space;
    ProductDistribution dist(shared, std::move(table));

    std::optional<Entity> entity;
    if (structured && doc.contains("entity")) {
      const Json& e = doc["entity"];
      if (!e.is_object()) throw ParseError(ErrorCode::kParseError, 0, "\"entity\" must be an object");
      for (const auto& [name, _] : e.items()) shared->id(name);
      std::vector<ValueId> values;
      for (FeatureId f = 0; f < shared->size(); ++f) {
        const std::string& name = shared->name(f);
        if (!e.contains(name)) throw Error(ErrorCode::kMissingFeature, "entity has no value for '" + name + "'");
        values.push_back(shared->value_id(f, value_text(e[name], name)));
      }
      entity.emplace(shared, std::move(values));
    }
    return SidecarSpec{shared, std::move(entity), std::move(dist)};
  });
}

}  // namespace dshap
