#ifndef DSHAP_CIRCUIT_H_
#define DSHAP_CIRCUIT_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dshap/feature_space.h"

namespace dshap {

using GateId = std::uint32_t;

enum class GateKind : std::uint8_t { kVariable, kEquality, kConstant, kAnd, kOr, kNot };

// One gate description. `feature` is used by Variable/Equality, `value` by
// Equality (domain index) and Constant (0 or 1).
struct Gate {
  GateKind kind = GateKind::kConstant;
  FeatureId feature = 0;
  ValueId value = 0;
  std::vector<GateId> inputs;

  bool is_leaf() const {
    return kind == GateKind::kVariable || kind == GateKind::kEquality || kind == GateKind::kConstant;
  }
};

enum class Determinism : std::uint8_t { kUnverified, kTrusted, kVerified };

// Immutable Boolean circuit over a feature space with a single output gate.
class Circuit {
 public:
  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }

  std::size_t size() const { return gates_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const Gate& gate(GateId g) const { return gates_[g]; }
  std::span<const Gate> gates() const { return gates_; }
  std::span<const GateId> topological_order() const { return order_; }
  GateId output() const { return output_; }

  const FeatureSet& var_set(GateId g) const { return var_sets_[g]; }
  const FeatureSet& variables() const { return var_sets_[output_]; }

  // True when the circuit has no Equality gates.
  bool is_binary() const { return !has_equality_; }

  Determinism determinism() const { return determinism_; }
  bool deterministic() const { return determinism_ != Determinism::kUnverified; }
  bool decomposable_checked() const { return decomposable_checked_; }
  Circuit with_determinism(Determinism d) const;
  Circuit with_decomposability_checked() const;

  bool evaluate(const Entity& e) const;
  bool evaluate(std::span<const ValueId> values) const;
  // Writes the value of every gate into `out` (indexed by gate id).
  void evaluate_gates(std::span<const ValueId> values, std::vector<char>& out) const;

 private:
  friend Circuit build_circuit(SpacePtr space, std::vector<Gate> gates, GateId output);

  SpacePtr space_;
  std::vector<Gate> gates_;
  std::vector<GateId> order_;
  std::vector<FeatureSet> var_sets_;
  GateId output_ = 0;
  std::size_t edge_count_ = 0;
  bool has_equality_ = false;
  bool decomposable_checked_ = false;
  Determinism determinism_ = Determinism::kUnverified;
};

// Validates the gate list (ids are vector indices) and computes the
// topological order and variable sets.
Circuit build_circuit(SpacePtr space, std::vector<Gate> gates, GateId output);

class CircuitBuilder {
 public:
  explicit CircuitBuilder(SpacePtr space) : space_(std::move(space)) {}

  GateId add_variable(FeatureId f);
  GateId add_variable(std::string_view name) { return add_variable(space_->id(name)); }
  GateId add_equality(FeatureId f, ValueId v);
  GateId add_equality(std::string_view name, std::string_view value);
  GateId add_constant(bool value);
  GateId add_and(std::vector<GateId> inputs);
  GateId add_or(std::vector<GateId> inputs);
  GateId add_not(GateId input);
  GateId add(Gate gate);

  std::size_t size() const { return gates_.size(); }
  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }

  Circuit build(GateId output) const { return build_circuit(space_, gates_, output); }

 private:
  SpacePtr space_;
  std::vector<Gate> gates_;
};

// C_{+x} / C_{-x}: Variable(x) gates become constants. Binary features only.
Circuit condition(const Circuit& c, FeatureId x, bool b);

// C_{x=v}: Equality(x, v) becomes 1, Equality(x, v') becomes 0. Variable(x)
// gates are read as Equality(x, 1).
Circuit condition_equality(const Circuit& c, FeatureId x, ValueId v);

}  // namespace dshap

#endif  // DSHAP_CIRCUIT_H_
