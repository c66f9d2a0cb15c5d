#ifndef DSHAP_SHAP_ENGINE_H_
#define DSHAP_SHAP_ENGINE_H_

#include <cstdint>
#include <vector>

#include "dshap/circuit.h"
#include "dshap/rational.h"

namespace dshap {

// Counts multiplications performed by the table recurrences (And-gate
// convolutions and Or-gate binomial corrections).
struct EngineStats {
  std::uint64_t multiplications = 0;
  std::uint64_t gate_visits = 0;

  EngineStats& operator+=(const EngineStats& o) {
    multiplications += o.multiplications;
    gate_visits += o.gate_visits;
    return *this;
  }
};

// gamma/delta for one gate, indexed by l = 0..|var(g) \ {x}|.
struct GateTable {
  std::vector<Rational> gamma;
  std::vector<Rational> delta;
};

// Dynamic program over the fan-in-2 circuit with the non-smooth Or rule.
// Requires a decomposable circuit whose determinism is trusted or verified.
Rational shap_score(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                    EngineStats* stats = nullptr);

// Same value, computed on the explicitly smoothed circuit where Or gates just add.
Rational shap_score_smooth(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                           EngineStats* stats = nullptr);

struct SmoothTrace {
  Circuit smoothed;
  // Image of every gate of the fan-in-2 normalized input inside `smoothed`.
  std::vector<GateId> fanin2_to_smoothed;
  // Image of every original gate inside the fan-in-2 normalized circuit.
  std::vector<GateId> original_to_fanin2;
  std::vector<GateTable> tables;  // indexed by gate id of `smoothed`
  // Output tables padded to |X \ {x}| + 1 entries.
  std::vector<Rational> output_gamma;
  std::vector<Rational> output_delta;
  Rational score;
};

SmoothTrace shap_score_smooth_traced(const Circuit& c, const ProductDistribution& p, const Entity& e,
                                     FeatureId x);

// Sum over |S| = k of E[C(e') | e' agrees with e on S].
Rational compute_H(const Circuit& c, const ProductDistribution& p, const Entity& e, std::size_t k);
// All H values for k = 0..|X|.
std::vector<Rational> compute_H_all(const Circuit& c, const ProductDistribution& p, const Entity& e);

// Multi-valued features: conditions on every value of x.
Rational shap_score_nonbinary(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                              EngineStats* stats = nullptr);

struct ShapReport {
  std::vector<Rational> scores;    // indexed by feature id
  std::vector<FeatureId> ranking;  // descending score, ties by feature order
  bool classifier_output = false;
  Rational expected_value;
  Rational efficiency_residual;
};

enum class Algorithm { kDynamic, kSmooth };

struct ShapOptions {
  Algorithm algorithm = Algorithm::kDynamic;
  unsigned threads = 0;  // 0: hardware concurrency
  EngineStats* stats = nullptr;
};

// Scores every feature (binary features through the gamma/delta path,
// multi-valued ones through the per-value path) and checks efficiency.
ShapReport shap_all(const Circuit& c, const ProductDistribution& p, const Entity& e, const ShapOptions& options = {});

std::vector<FeatureId> rank_features(const std::vector<Rational>& scores);

// #sat(C) = 2^|X| (C(e) - sum of uniform SHAP scores).
BigInt model_count_via_shap(const Circuit& c, const Entity& e);

}  // namespace dshap

#endif  // DSHAP_SHAP_ENGINE_H_
