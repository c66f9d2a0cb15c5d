#include <gtest/gtest.h>

#include "dshap/checks.h"
#include "dshap/oracle.h"
#include "dshap/shap_engine.h"
#include "dshap/transforms.h"
#include "fixtures.h"
#include "generators.h"
#include "test_util.h"

namespace dshap {
namespace {

using testing::Example;
using testing::Rng;

Rational q(long n, long d = 1) { return make_rational(n, d); }

std::vector<Rational> qs(std::initializer_list<std::pair<long, long>> values) {
  std::vector<Rational> out;
  for (const auto& [n, d] : values) out.push_back(q(n, d));
  return out;
}

struct ExampleEngine : ::testing::Test {
  Example fig;
  Circuit c = require_deterministic(fig.circuit);
  ProductDistribution uniform = ProductDistribution::uniform(fig.space);
  std::vector<Rational> expected = {q(23, 64), q(-9, 64), q(15, 64), q(15, 64)};
};

TEST_F(ExampleEngine, DynamicProgramScores) {
  for (FeatureId f = 0; f < 4; ++f) EXPECT_EQ(shap_score(c, uniform, fig.entity, f), expected[f]) << f;
}

TEST_F(ExampleEngine, SmoothScores) {
  for (FeatureId f = 0; f < 4; ++f) EXPECT_EQ(shap_score_smooth(c, uniform, fig.entity, f), expected[f]) << f;
}

TEST_F(ExampleEngine, ShapAllReport) {
  for (Algorithm a : {Algorithm::kDynamic, Algorithm::kSmooth}) {
    const ShapReport r = shap_all(c, uniform, fig.entity, {a, 2, nullptr});
    EXPECT_EQ(r.scores, expected);
    EXPECT_EQ(r.ranking, (std::vector<FeatureId>{0, 2, 3, 1}));
    EXPECT_TRUE(r.classifier_output);
    EXPECT_EQ(r.expected_value, q(5, 16));
    EXPECT_EQ(r.efficiency_residual, 0);
  }
}

TEST_F(ExampleEngine, NonBinaryPathMatches) {
  for (FeatureId f = 0; f < 4; ++f) EXPECT_EQ(shap_score_nonbinary(c, uniform, fig.entity, f), expected[f]);
}

TEST_F(ExampleEngine, ModelCountFromEveryEntity) {
  testing::for_each_entity(fig.space, [&](const Entity& e) { EXPECT_EQ(model_count_via_shap(c, e), 5); });
}

TEST_F(ExampleEngine, TracedTablesForNf) {
  const FeatureId nf = 2;
  const SmoothTrace t = shap_score_smooth_traced(c, uniform, fig.entity, nf);
  EXPECT_EQ(t.score, q(15, 64));
  EXPECT_EQ(t.output_gamma, qs({{3, 8}, {3, 2}, {2, 1}, {1, 1}}));
  EXPECT_EQ(t.output_delta, qs({{1, 4}, {3, 4}, {1, 2}, {0, 1}}));

  const Circuit n = normalize_fanin2(c);
  auto table_of_fanin2 = [&](GateId g) -> const GateTable& { return t.tables[t.fanin2_to_smoothed[g]]; };
  auto table_of = [&](GateId original) -> const GateTable& {
    return table_of_fanin2(t.original_to_fanin2[original]);
  };

  // not dtr
  EXPECT_EQ(table_of(fig.not_dtr).gamma, qs({{1, 2}, {1, 1}}));
  EXPECT_EQ(table_of(fig.not_dtr).delta, qs({{1, 2}, {1, 1}}));
  // (nf and na) and not dtr
  const GateId conj = t.original_to_fanin2[fig.conj];
  EXPECT_EQ(table_of_fanin2(conj).gamma, qs({{1, 4}, {1, 1}, {1, 1}}));
  EXPECT_EQ(table_of_fanin2(conj).delta, qs({{0, 1}, {0, 1}, {0, 1}}));
  // nf and na
  const GateId inner = n.gate(conj).inputs[0];
  ASSERT_EQ(n.var_set(inner), FeatureSet::of(4, {2, 3}));
  EXPECT_EQ(table_of_fanin2(inner).gamma, qs({{1, 2}, {1, 1}}));
  EXPECT_EQ(table_of_fanin2(inner).delta, qs({{0, 1}, {0, 1}}));
  // the Or
  EXPECT_EQ(table_of(fig.disj).gamma, qs({{3, 4}, {3, 2}, {1, 1}}));
  EXPECT_EQ(table_of(fig.disj).delta, qs({{1, 2}, {1, 2}, {0, 1}}));
  // dtr and (tautology over nf, na), added by smoothing
  const Gate& disj = t.smoothed.gate(t.fanin2_to_smoothed[t.original_to_fanin2[fig.disj]]);
  const GateId padded = disj.inputs[0];
  EXPECT_EQ(t.tables[padded].gamma, qs({{1, 2}, {1, 2}, {0, 1}}));
  EXPECT_EQ(t.tables[padded].delta, qs({{1, 2}, {1, 2}, {0, 1}}));
  const GateId tautology = t.smoothed.gate(padded).inputs[1];
  EXPECT_EQ(t.tables[tautology].gamma, qs({{1, 1}, {1, 1}}));
  EXPECT_EQ(t.tables[tautology].delta, qs({{1, 1}, {1, 1}}));
}

TEST(ShapScore, SingleVariable) {
  const auto space = FeatureSpace::binary({"x"});
  CircuitBuilder b(space);
  const Circuit c = require_deterministic(b.build(b.add_variable("x")));
  const auto u = ProductDistribution::uniform(space);
  EXPECT_EQ(shap_score(c, u, Entity::binary(space, {1}), 0), q(1, 2));
  EXPECT_EQ(shap_score_smooth(c, u, Entity::binary(space, {1}), 0), q(1, 2));
  EXPECT_EQ(shap_score(c, u, Entity::binary(space, {0}), 0), q(-1, 2));
}

TEST(ShapScore, ConstantCircuitScoresZero) {
  const auto space = testing::binary_space(3);
  for (bool value : {false, true}) {
    CircuitBuilder b(space);
    const Circuit c = require_deterministic(b.build(b.add_constant(value)));
    const auto u = ProductDistribution::uniform(space);
    const ShapReport r = shap_all(c, u, Entity::binary(space, {1, 0, 1}));
    for (const auto& s : r.scores) EXPECT_EQ(s, 0);
    EXPECT_EQ(r.expected_value, value ? 1 : 0);
  }
}

TEST(ShapScore, IrrelevantFeatureScoresZero) {
  Rng rng(5);
  for (int round = 0; round < 40; ++round) {
    const auto space = testing::binary_space(4 + round % 6);
    testing::CircuitShape shape;
    shape.partial_root_probability = 1.0;
    const Circuit c = testing::random_dd_circuit(rng, space, shape);
    const auto p = testing::random_distribution(rng, space);
    const Entity e = testing::random_entity(rng, space);
    for (FeatureId f = 0; f < space->size(); ++f) {
      if (!c.variables().contains(f)) {
        EXPECT_EQ(shap_score(c, p, e, f), 0);
      }
    }
  }
}

TEST(ShapScore, Errors) {
  const Example fig;
  const auto u = ProductDistribution::uniform(fig.space);
  EXPECT_CODE(shap_score(fig.circuit, u, fig.entity, 0), ErrorCode::kDeterminismUnverified);

  const auto space = FeatureSpace::binary({"x"});
  CircuitBuilder b(space);
  const GateId x = b.add_variable("x");
  const Circuit overlapping = b.build(b.add_and({x, b.add_not(x)})).with_determinism(Determinism::kTrusted);
  EXPECT_CODE(shap_score(overlapping, ProductDistribution::uniform(space), Entity::binary(space, {1}), 0),
              ErrorCode::kNotDecomposable);

  const Circuit c = require_deterministic(fig.circuit);
  EXPECT_CODE(compute_H(c, u, fig.entity, 5), ErrorCode::kIndexOutOfRange);
  EXPECT_CODE(shap_score(c, u, fig.entity, 4), ErrorCode::kUnknownFeature);
  const auto other = testing::binary_space(4);
  EXPECT_CODE(shap_score(c, ProductDistribution::uniform(other), fig.entity, 0), ErrorCode::kDomainMismatch);
}

TEST(ShapScore, AgreesWithOraclesOnRandomCircuits) {
  Rng rng(7);
  for (int round = 0; round < 150; ++round) {
    const auto space = testing::binary_space(3 + round % 8);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const auto p = testing::random_distribution(rng, space);
    const Entity e = testing::random_entity(rng, space);
    const auto m = Classifier::from_circuit(c);
    const auto brute = shap_bruteforce_subsets_all(m, p, e);
    const ShapReport r = shap_all(c, p, e, {Algorithm::kDynamic, 1, nullptr});
    EXPECT_EQ(r.scores, brute) << "round " << round;
    for (FeatureId f = 0; f < space->size(); ++f) {
      EXPECT_EQ(shap_score_smooth(c, p, e, f), brute[f]);
      if (space->size() <= 6) {
        EXPECT_EQ(shap_bruteforce_permutations(m, p, e, f), brute[f]);
      }
    }
    EXPECT_EQ(r.expected_value, expected_value(m, p));
  }
}

TEST(ShapScore, NegationFlipsSign) {
  Rng rng(8);
  for (int round = 0; round < 40; ++round) {
    const auto space = testing::binary_space(3 + round % 6);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const Circuit neg = negate(c);
    const auto p = testing::random_distribution(rng, space);
    const Entity e = testing::random_entity(rng, space);
    for (FeatureId f = 0; f < space->size(); ++f) EXPECT_EQ(shap_score(neg, p, e, f), -shap_score(c, p, e, f));
  }
}

TEST(ShapScore, PolarityInversionUnderUniform) {
  Rng rng(9);
  for (int round = 0; round < 40; ++round) {
    const auto space = testing::binary_space(3 + round % 6);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const Circuit inv = require_deterministic(invert_polarity(c));
    const auto u = ProductDistribution::uniform(space);
    const Entity e = testing::random_entity(rng, space);
    const auto lhs = shap_bruteforce_subsets_all(Classifier::from_circuit(c), u, e);
    const auto rhs = shap_bruteforce_subsets_all(Classifier::from_circuit(inv), u, e.inverted());
    EXPECT_EQ(lhs, rhs);
    for (FeatureId f = 0; f < space->size(); ++f) EXPECT_EQ(shap_score(inv, u, e.inverted(), f), lhs[f]);
  }
}

TEST(ShapAll, ThreadCountDoesNotChangeScores) {
  Rng rng(10);
  const auto space = testing::binary_space(12);
  const Circuit c = testing::random_dd_circuit(rng, space);
  const auto p = testing::random_distribution(rng, space);
  const Entity e = testing::random_entity(rng, space);
  const ShapReport one = shap_all(c, p, e, {Algorithm::kDynamic, 1, nullptr});
  const ShapReport four = shap_all(c, p, e, {Algorithm::kDynamic, 4, nullptr});
  EXPECT_EQ(one.scores, four.scores);
  EXPECT_EQ(one.ranking, four.ranking);
}

TEST(ShapAll, RankingTieBreakIsFeatureOrder) {
  EXPECT_EQ(rank_features({q(1), q(2), q(1), q(2)}), (std::vector<FeatureId>{1, 3, 0, 2}));
}

TEST(ComputeH, ConstantOneGivesBinomials) {
  const auto space = testing::binary_space(5);
  CircuitBuilder b(space);
  const Circuit c = require_deterministic(b.build(b.add_constant(true)));
  const auto h = compute_H_all(c, ProductDistribution::uniform(space), Entity::binary(space, {0, 1, 0, 1, 1}));
  ASSERT_EQ(h.size(), 6U);
  for (unsigned k = 0; k <= 5; ++k) EXPECT_EQ(h[k], Rational(binomial(5, k)));
}

TEST(ComputeH, MatchesBruteForce) {
  Rng rng(11);
  for (int round = 0; round < 60; ++round) {
    const auto space = testing::binary_space(2 + round % 9);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const auto p = testing::random_distribution(rng, space);
    const Entity e = testing::random_entity(rng, space);
    const auto m = Classifier::from_circuit(c);
    const auto h = compute_H_all(c, p, e);
    for (std::size_t k = 0; k <= space->size(); ++k) EXPECT_EQ(h[k], bruteforce_H(m, p, e, k)) << k;
    EXPECT_EQ(h[space->size()], c.evaluate(e) ? 1 : 0);
  }
}

TEST(NonBinary, EqualityGateScores) {
  auto space = std::make_shared<FeatureSpace>();
  space->add_feature("x", {"a", "b", "c"});
  CircuitBuilder b(space);
  const Circuit c = require_deterministic(b.build(b.add_equality("x", "a")));
  const auto u = ProductDistribution::uniform(space);
  EXPECT_EQ(shap_score_nonbinary(c, u, Entity(space, {0}), 0), q(2, 3));
  EXPECT_EQ(shap_score_nonbinary(c, u, Entity(space, {1}), 0), q(-1, 3));
}

TEST(NonBinary, AgreesWithOracleOnMixedCircuits) {
  Rng rng(12);
  for (int round = 0; round < 80; ++round) {
    const auto space = testing::mixed_space(rng, 2 + round % 5, 4);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const auto p = testing::random_distribution(rng, space);
    const Entity e = testing::random_entity(rng, space);
    const auto brute = shap_bruteforce_subsets_all(Classifier::from_circuit(c), p, e);
    EXPECT_EQ(shap_all(c, p, e, {Algorithm::kDynamic, 1, nullptr}).scores, brute);
    for (FeatureId f = 0; f < space->size(); ++f) EXPECT_EQ(shap_score_nonbinary(c, p, e, f), brute[f]);
  }
}

TEST(EngineStats, CountsGrowWithCircuit) {
  const auto run = [](std::size_t n) {
    const Circuit c = testing::chain_circuit(n);
    const auto u = ProductDistribution::uniform(c.space_ptr());
    EngineStats stats;
    shap_score(c, u, Entity(c.space_ptr(), std::vector<ValueId>(n, 1)), 0, &stats);
    return stats;
  };
  const EngineStats small = run(8);
  const EngineStats large = run(16);
  EXPECT_GT(small.multiplications, 0U);
  EXPECT_GT(large.multiplications, small.multiplications);
  EXPECT_GT(large.gate_visits, small.gate_visits);
}

}  // namespace
}  // namespace dshap
