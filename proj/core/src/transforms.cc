#include "dshap/transforms.h"

#include <unordered_map>

#include "dshap/error.h"

namespace dshap {
namespace {

Circuit carry_flags(const Circuit& from, Circuit to) {
  to = to.with_determinism(from.determinism());
  return from.decomposable_checked() ? to.with_decomposability_checked() : to;
}

bool is_binary_gate(const Gate& g) {
  return (g.kind == GateKind::kAnd || g.kind == GateKind::kOr) && g.inputs.size() == 2;
}

class TautologyCache {
 public:
  TautologyCache(CircuitBuilder& builder, bool use_equality) : builder_(builder), use_equality_(use_equality) {}

  GateId get(const FeatureSet& s) {
    if (auto it = cache_.find(s); it != cache_.end()) return it->second;
    const auto members = s.members();
    GateId gate;
    if (members.size() == 1) {
      gate = single(members.front());
    } else {
      FeatureSet prefix = s;
      prefix.erase(members.back());
      const GateId head = get(prefix);
      gate = builder_.add_and({head, get(FeatureSet::of(s.capacity(), {members.back()}))});
    }
    cache_.emplace(s, gate);
    return gate;
  }

 private:
  GateId single(FeatureId x) {
    if (!use_equality_) {
      const GateId var = builder_.add_variable(x);
      return builder_.add_or({var, builder_.add_not(var)});
    }
    const auto d = static_cast<ValueId>(builder_.space().domain_size(x));
    GateId acc = builder_.add_equality(x, 0);
    for (ValueId v = 1; v < d; ++v) acc = builder_.add_or({acc, builder_.add_equality(x, v)});
    return acc;
  }

  CircuitBuilder& builder_;
  bool use_equality_;
  std::unordered_map<FeatureSet, GateId, FeatureSetHash> cache_;
};

}  // namespace

bool is_fanin2(const Circuit& c) {
  for (const auto& g : c.gates()) {
    if ((g.kind == GateKind::kAnd || g.kind == GateKind::kOr) && g.inputs.size() != 2) return false;
  }
  return true;
}

Circuit normalize_fanin2(const Circuit& c, std::vector<GateId>* old_to_new) {
  if (is_fanin2(c)) {
    if (old_to_new != nullptr) {
      old_to_new->resize(c.size());
      for (GateId g = 0; g < c.size(); ++g) (*old_to_new)[g] = g;
    }
    return c;
  }
  CircuitBuilder b(c.space_ptr());
  std::vector<GateId> map(c.size());
  for (auto id : c.topological_order()) {
    const auto& g = c.gate(id);
    if (g.kind != GateKind::kAnd && g.kind != GateKind::kOr) {
      Gate copy = g;
      for (auto& in : copy.inputs) in = map[in];
      map[id] = b.add(std::move(copy));
      continue;
    }
    const bool is_and = g.kind == GateKind::kAnd;
    auto make = [&](GateId l, GateId r) { return is_and ? b.add_and({l, r}) : b.add_or({l, r}); };
    if (g.inputs.size() == 1) {
      map[id] = make(map[g.inputs[0]], b.add_constant(is_and));
      continue;
    }
    GateId acc = make(map[g.inputs[0]], map[g.inputs[1]]);
    for (std::size_t i = 2; i < g.inputs.size(); ++i) acc = make(acc, map[g.inputs[i]]);
    map[id] = acc;
  }
  Circuit out = carry_flags(c, b.build(map[c.output()]));
  if (old_to_new != nullptr) *old_to_new = std::move(map);
  return out;
}

bool is_smooth(const Circuit& c) {
  for (GateId id = 0; id < c.size(); ++id) {
    const auto& g = c.gate(id);
    if (g.kind != GateKind::kOr) continue;
    for (auto in : g.inputs) {
      if (!(c.var_set(in) == c.var_set(id))) return false;
    }
  }
  return true;
}

Circuit smooth(const Circuit& c, std::vector<GateId>* old_to_new) {
  for (const auto& g : c.gates()) {
    if ((g.kind == GateKind::kAnd || g.kind == GateKind::kOr) && !is_binary_gate(g)) {
      throw Error(ErrorCode::kNotFanin2, "smoothing needs fan-in-2 And/Or gates");
    }
  }
  CircuitBuilder b(c.space_ptr());
  TautologyCache tautologies(b, !c.is_binary());
  std::vector<GateId> map(c.size());
  const std::size_t n = c.space().size();
  for (auto id : c.topological_order()) {
    Gate g = c.gate(id);
    if (g.kind == GateKind::kOr) {
      const GateId g1 = g.inputs[0];
      const GateId g2 = g.inputs[1];
      FeatureSet only1(n), only2(n);
      for (auto f : c.var_set(g1).members()) {
        if (!c.var_set(g2).contains(f)) only1.insert(f);
      }
      for (auto f : c.var_set(g2).members()) {
        if (!c.var_set(g1).contains(f)) only2.insert(f);
      }
      GateId in1 = map[g1];
      GateId in2 = map[g2];
      if (!only2.empty()) in1 = b.add_and({in1, tautologies.get(only2)});
      if (!only1.empty()) in2 = b.add_and({in2, tautologies.get(only1)});
      map[id] = b.add_or({in1, in2});
      continue;
    }
    for (auto& in : g.inputs) in = map[in];
    map[id] = b.add(std::move(g));
  }
  Circuit out = carry_flags(c, b.build(map[c.output()]));
  if (old_to_new != nullptr) *old_to_new = std::move(map);
  return out;
}

Circuit invert_polarity(const Circuit& c) {
  if (!c.is_binary()) throw Error(ErrorCode::kNonBinaryCircuit, "polarity inversion needs a binary circuit");
  CircuitBuilder b(c.space_ptr());
  std::vector<GateId> map(c.size());
  for (auto id : c.topological_order()) {
    Gate g = c.gate(id);
    if (g.kind == GateKind::kVariable) {
      map[id] = b.add_not(b.add(std::move(g)));
      continue;
    }
    for (auto& in : g.inputs) in = map[in];
    map[id] = b.add(std::move(g));
  }
  return b.build(map[c.output()]);
}

Circuit negate(const Circuit& c) {
  std::vector<Gate> gates(c.gates().begin(), c.gates().end());
  gates.push_back(Gate{GateKind::kNot, 0, 0, {c.output()}});
  const auto out = static_cast<GateId>(gates.size() - 1);
  return carry_flags(c, build_circuit(c.space_ptr(), std::move(gates), out));
}

}  // namespace dshap
