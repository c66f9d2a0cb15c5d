#include "dshap/circuit.h"

#include <algorithm>

#include "dshap/error.h"

namespace dshap {
namespace {

void validate_gate(const FeatureSpace& space, const Gate& g, GateId id, std::size_t n) {
  const auto where = " (gate " + std::to_string(id) + ")";
  switch (g.kind) {
    case GateKind::kVariable:
    case GateKind::kEquality:
      if (g.feature >= space.size()) throw Error(ErrorCode::kUnknownFeature, "feature id out of range" + where);
      if (g.kind == GateKind::kVariable && !space.is_binary(g.feature)) {
        throw Error(ErrorCode::kDomainMismatch, "Variable gate on non-binary feature '" + space.name(g.feature) + "'" + where);
      }
      if (g.kind == GateKind::kEquality && g.value >= space.domain_size(g.feature)) {
        throw Error(ErrorCode::kValueOutOfDomain, "Equality value out of domain" + where);
      }
      if (!g.inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "leaf gate with inputs" + where);
      break;
    case GateKind::kConstant:
      if (g.value > 1) throw Error(ErrorCode::kInvalidArgument, "constant must be 0 or 1" + where);
      if (!g.inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "leaf gate with inputs" + where);
      break;
    case GateKind::kNot:
      if (g.inputs.size() != 1) throw Error(ErrorCode::kInvalidArgument, "Not gate needs exactly one input" + where);
      break;
    case GateKind::kAnd:
    case GateKind::kOr:
      if (g.inputs.empty()) throw Error(ErrorCode::kInvalidArgument, "And/Or gate needs an input" + where);
      break;
  }
  for (auto in : g.inputs) {
    if (in >= n) throw Error(ErrorCode::kDanglingReference, "input " + std::to_string(in) + " does not exist" + where);
  }
  if (g.inputs.size() > 1) {
    auto sorted = g.inputs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::kDuplicateEdge, "repeated input" + where);
    }
  }
}

// Post-order DFS visiting roots in id order, so an already ordered list maps to
// the identity order.
std::vector<GateId> topological_sort(const std::vector<Gate>& gates) {
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> colour(gates.size(), kWhite);
  std::vector<GateId> order;
  order.reserve(gates.size());
  std::vector<std::pair<GateId, std::size_t>> stack;
  for (GateId root = 0; root < gates.size(); ++root) {
    if (colour[root] != kWhite) continue;
    stack.emplace_back(root, 0);
    colour[root] = kGrey;
    while (!stack.empty()) {
      auto& [g, next] = stack.back();
      const auto& inputs = gates[g].inputs;
      if (next < inputs.size()) {
        const GateId in = inputs[next++];
        if (colour[in] == kGrey) {
          throw Error(ErrorCode::kCycleDetected, "cycle through gate " + std::to_string(in));
        }
        if (colour[in] == kWhite) {
          colour[in] = kGrey;
          stack.emplace_back(in, 0);
        }
      } else {
        colour[g] = kBlack;
        order.push_back(g);
        stack.pop_back();
      }
    }
  }
  return order;
}

}  // namespace

Circuit build_circuit(SpacePtr space, std::vector<Gate> gates, GateId output) {
  const std::size_t n = gates.size();
  if (n == 0) throw Error(ErrorCode::kDanglingReference, "empty circuit");
  if (output >= n) throw Error(ErrorCode::kDanglingReference, "output gate does not exist");

  bool has_variable = false;
  bool has_equality = false;
  std::size_t edges = 0;
  std::vector<std::uint32_t> fanout(n, 0);
  for (GateId id = 0; id < n; ++id) {
    const auto& g = gates[id];
    validate_gate(*space, g, id, n);
    has_variable |= g.kind == GateKind::kVariable;
    has_equality |= g.kind == GateKind::kEquality;
    edges += g.inputs.size();
    for (auto in : g.inputs) ++fanout[in];
  }
  if (has_variable && has_equality) {
    throw Error(ErrorCode::kDomainMismatch, "circuit mixes Variable and Equality gates");
  }

  auto order = topological_sort(gates);

  std::size_t sinks = 0;
  for (GateId id = 0; id < n; ++id) {
    if (fanout[id] == 0) {
      ++sinks;
      if (id != output) {
        throw Error(ErrorCode::kMultipleOutputs, "gate " + std::to_string(id) + " has no consumer but is not the output");
      }
    }
  }
  if (sinks != 1) throw Error(ErrorCode::kMultipleOutputs, "output gate has consumers");

  std::vector<FeatureSet> var_sets(n, FeatureSet(space->size()));
  for (auto id : order) {
    const auto& g = gates[id];
    if (g.kind == GateKind::kVariable || g.kind == GateKind::kEquality) {
      var_sets[id].insert(g.feature);
    }
    for (auto in : g.inputs) var_sets[id] |= var_sets[in];
  }

  Circuit c;
  c.space_ = std::move(space);
  c.gates_ = std::move(gates);
  c.order_ = std::move(order);
  c.var_sets_ = std::move(var_sets);
  c.output_ = output;
  c.edge_count_ = edges;
  c.has_equality_ = has_equality;
  return c;
}

Circuit Circuit::with_determinism(Determinism d) const {
  Circuit c = *this;
  c.determinism_ = d;
  return c;
}

Circuit Circuit::with_decomposability_checked() const {
  Circuit c = *this;
  c.decomposable_checked_ = true;
  return c;
}

void Circuit::evaluate_gates(std::span<const ValueId> values, std::vector<char>& out) const {
  out.resize(gates_.size());
  for (auto id : order_) {
    const auto& g = gates_[id];
    char v = 0;
    switch (g.kind) {
      case GateKind::kVariable: v = values[g.feature] == 1; break;
      case GateKind::kEquality: v = values[g.feature] == g.value; break;
      case GateKind::kConstant: v = static_cast<char>(g.value); break;
      case GateKind::kNot: v = !out[g.inputs[0]]; break;
      case GateKind::kAnd:
        v = 1;
        for (auto in : g.inputs) {
          if (!out[in]) { v = 0; break; }
        }
        break;
      case GateKind::kOr:
        for (auto in : g.inputs) {
          if (out[in]) { v = 1; break; }
        }
        break;
    }
    out[id] = v;
  }
}

bool Circuit::evaluate(std::span<const ValueId> values) const {
  std::vector<char> scratch;
  evaluate_gates(values, scratch);
  return scratch[output_] != 0;
}

bool Circuit::evaluate(const Entity& e) const { return evaluate(e.values()); }

GateId CircuitBuilder::add(Gate gate) {
  validate_gate(*space_, gate, static_cast<GateId>(gates_.size()), gates_.size());
  gates_.push_back(std::move(gate));
  return static_cast<GateId>(gates_.size() - 1);
}

GateId CircuitBuilder::add_variable(FeatureId f) {
  return add(Gate{GateKind::kVariable, f, 0, {}});
}

GateId CircuitBuilder::add_equality(FeatureId f, ValueId v) {
  return add(Gate{GateKind::kEquality, f, v, {}});
}

GateId CircuitBuilder::add_equality(std::string_view name, std::string_view value) {
  const auto f = space_->id(name);
  return add_equality(f, space_->value_id(f, value));
}

GateId CircuitBuilder::add_constant(bool value) {
  return add(Gate{GateKind::kConstant, 0, value ? 1U : 0U, {}});
}

GateId CircuitBuilder::add_and(std::vector<GateId> inputs) {
  return add(Gate{GateKind::kAnd, 0, 0, std::move(inputs)});
}

GateId CircuitBuilder::add_or(std::vector<GateId> inputs) {
  return add(Gate{GateKind::kOr, 0, 0, std::move(inputs)});
}

GateId CircuitBuilder::add_not(GateId input) {
  return add(Gate{GateKind::kNot, 0, 0, {input}});
}

namespace {

Circuit substitute_leaves(const Circuit& c, FeatureId x, ValueId v) {
  std::vector<Gate> gates(c.gates().begin(), c.gates().end());
  for (auto& g : gates) {
    if (g.feature != x) continue;
    if (g.kind == GateKind::kVariable) {
      g = Gate{GateKind::kConstant, 0, v == 1 ? 1U : 0U, {}};
    } else if (g.kind == GateKind::kEquality) {
      g = Gate{GateKind::kConstant, 0, g.value == v ? 1U : 0U, {}};
    }
  }
  Circuit out = build_circuit(c.space_ptr(), std::move(gates), c.output()).with_determinism(c.determinism());
  return c.decomposable_checked() ? out.with_decomposability_checked() : out;
}

}  // namespace

Circuit condition(const Circuit& c, FeatureId x, bool b) {
  c.space().check_feature(x);
  if (!c.space().is_binary(x)) {
    throw Error(ErrorCode::kDomainMismatch, "'" + c.space().name(x) + "' is not binary");
  }
  return substitute_leaves(c, x, b ? 1 : 0);
}

Circuit condition_equality(const Circuit& c, FeatureId x, ValueId v) {
  c.space().check_feature(x);
  if (v >= c.space().domain_size(x)) {
    throw Error(ErrorCode::kValueOutOfDomain, "value index out of domain of '" + c.space().name(x) + "'");
  }
  return substitute_leaves(c, x, v);
}

}  // namespace dshap
