#ifndef DSHAP_CHECKS_H_
#define DSHAP_CHECKS_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "dshap/circuit.h"

namespace dshap {

inline constexpr std::size_t kDefaultDeterminismMaxVars = 16;

// Recomputes var(g) for every gate from scratch.
std::vector<FeatureSet> compute_var_sets(const Circuit& c);

struct DecomposabilityReport {
  std::vector<GateId> violations;  // And gates with overlapping inputs
  bool ok() const { return violations.empty(); }
};

DecomposabilityReport check_decomposability(const Circuit& c);

struct DeterminismReport {
  enum class Status { kOk, kViolation, kSkipped };
  Status status = Status::kOk;
  std::optional<Entity> counterexample;
  std::optional<GateId> gate;

  bool ok() const { return status == Status::kOk; }
};

// Exhaustive over var(C) in binary-counter order (last feature varies
// fastest); features outside var(C) are fixed to value 0.
DeterminismReport check_determinism_bruteforce(const Circuit& c,
                                               std::size_t max_vars = kDefaultDeterminismMaxVars);

// Throws NotDecomposable, otherwise returns the circuit flagged as checked.
Circuit require_decomposable(const Circuit& c);
// Throws DeterminismUnverified unless the brute-force check passes; returns the
// circuit flagged as verified.
Circuit require_deterministic(const Circuit& c, std::size_t max_vars = kDefaultDeterminismMaxVars);

}  // namespace dshap

#endif  // DSHAP_CHECKS_H_
