#include "dshap/checks.h"

#include "dshap/error.h"

namespace dshap {

std::vector<FeatureSet> compute_var_sets(const Circuit& c) {
  std::vector<FeatureSet> sets(c.size(), FeatureSet(c.space().size()));
  for (auto id : c.topological_order()) {
    const auto& g = c.gate(id);
    if (g.kind == GateKind::kVariable || g.kind == GateKind::kEquality) sets[id].insert(g.feature);
    for (auto in : g.inputs) sets[id] |= sets[in];
  }
  return sets;
}

DecomposabilityReport check_decomposability(const Circuit& c) {
  DecomposabilityReport report;
  for (auto id : c.topological_order()) {
    const auto& g = c.gate(id);
    if (g.kind != GateKind::kAnd || g.inputs.size() < 2) continue;
    // Inputs are pairwise disjoint iff their sizes add up to the union size.
    std::size_t total = 0;
    for (auto in : g.inputs) total += c.var_set(in).count();
    if (total != c.var_set(id).count()) report.violations.push_back(id);
  }
  return report;
}

DeterminismReport check_determinism_bruteforce(const Circuit& c, std::size_t max_vars) {
  DeterminismReport report;
  const auto features = c.variables().members();
  if (features.size() > max_vars) {
    report.status = DeterminismReport::Status::kSkipped;
    return report;
  }
  std::vector<GateId> ors;
  for (GateId id = 0; id < c.size(); ++id) {
    if (c.gate(id).kind == GateKind::kOr && c.gate(id).inputs.size() > 1) ors.push_back(id);
  }
  std::vector<ValueId> values(c.space().size(), 0);
  std::vector<char> gate_values;
  while (true) {
    c.evaluate_gates(values, gate_values);
    for (auto id : ors) {
      int true_inputs = 0;
      for (auto in : c.gate(id).inputs) true_inputs += gate_values[in];
      if (true_inputs > 1) {
        report.status = DeterminismReport::Status::kViolation;
        report.counterexample.emplace(c.space_ptr(), values);
        report.gate = id;
        return report;
      }
    }
    // Mixed-radix increment, last feature fastest.
    std::size_t i = features.size();
    while (i > 0) {
      const auto f = features[i - 1];
      if (++values[f] < c.space().domain_size(f)) break;
      values[f] = 0;
      --i;
    }
    if (i == 0) break;
  }
  return report;
}

Circuit require_decomposable(const Circuit& c) {
  if (c.decomposable_checked()) return c;
  const auto report = check_decomposability(c);
  if (!report.ok()) {
    throw Error(ErrorCode::kNotDecomposable,
                "And gate " + std::to_string(report.violations.front()) + " has overlapping inputs");
  }
  return c.with_decomposability_checked();
}

Circuit require_deterministic(const Circuit& c, std::size_t max_vars) {
  if (c.determinism() != Determinism::kUnverified) return c;
  const auto report = check_determinism_bruteforce(c, max_vars);
  switch (report.status) {
    case DeterminismReport::Status::kOk:
      return c.with_determinism(Determinism::kVerified);
    case DeterminismReport::Status::kViolation:
      throw Error(ErrorCode::kDeterminismUnverified,
                  "Or gate " + std::to_string(*report.gate) + " has two satisfied inputs");
    case DeterminismReport::Status::kSkipped:
      break;
  }
  throw Error(ErrorCode::kDeterminismUnverified,
              "circuit has more than " + std::to_string(max_vars) + " features; mark it trusted");
}

}  // namespace dshap
