#include <gtest/gtest.h>

#include "dshap/checks.h"
#include "dshap/oracle.h"
#include "dshap/transforms.h"
#include "fixtures.h"
#include "generators.h"
#include "test_util.h"

namespace dshap {
namespace {

using testing::Example;
using testing::Rng;
using testing::for_each_entity;

void expect_same_truth_table(const Circuit& a, const Circuit& b) {
  for_each_entity(a.space_ptr(), [&](const Entity& e) { ASSERT_EQ(a.evaluate(e), b.evaluate(e)); });
}

bool structurally_equal(const Circuit& a, const Circuit& b) {
  if (a.size() != b.size() || a.output() != b.output()) return false;
  for (GateId g = 0; g < a.size(); ++g) {
    const Gate& x = a.gate(g);
    const Gate& y = b.gate(g);
    if (x.kind != y.kind || x.feature != y.feature || x.value != y.value || x.inputs != y.inputs) return false;
  }
  return true;
}

TEST(NormalizeFanin2, ChainsWideGates) {
  const auto space = testing::binary_space(3);
  CircuitBuilder b(space);
  const Circuit c = b.build(b.add_and({b.add_variable(FeatureId{0}), b.add_variable(FeatureId{1}),
                                       b.add_variable(FeatureId{2})}));
  std::vector<GateId> map;
  const Circuit n = normalize_fanin2(c, &map);
  EXPECT_TRUE(is_fanin2(n));
  const Gate& top = n.gate(map[c.output()]);
  ASSERT_EQ(top.kind, GateKind::kAnd);
  EXPECT_EQ(n.gate(top.inputs[0]).kind, GateKind::kAnd);  // left-leaning
  expect_same_truth_table(c, n);
}

TEST(NormalizeFanin2, SingleInputOrGetsConstantZero) {
  const auto space = testing::binary_space(1);
  CircuitBuilder b(space);
  const Circuit c = b.build(b.add_or({b.add_variable(FeatureId{0})}));
  const Circuit n = normalize_fanin2(c);
  const Gate& top = n.gate(n.output());
  ASSERT_EQ(top.kind, GateKind::kOr);
  ASSERT_EQ(top.inputs.size(), 2U);
  const Gate& pad = n.gate(top.inputs[1]);
  EXPECT_EQ(pad.kind, GateKind::kConstant);
  EXPECT_EQ(pad.value, 0U);
  expect_same_truth_table(c, n);
}

TEST(NormalizeFanin2, FixpointOnFanin2Circuits) {
  const Example fig;
  const Circuit once = normalize_fanin2(fig.circuit);
  EXPECT_TRUE(structurally_equal(once, normalize_fanin2(once)));
}

TEST(Smooth, RequiresFanin2) {
  const Example fig;
  EXPECT_CODE(smooth(fig.circuit), ErrorCode::kNotFanin2);
}

TEST(Smooth, ExampleGainsTautologyGates) {
  const Example fig;
  const Circuit n = normalize_fanin2(fig.circuit);
  std::vector<GateId> map;
  const Circuit s = smooth(n, &map);
  EXPECT_TRUE(is_smooth(s));
  EXPECT_FALSE(is_smooth(n));
  // The Or's first input becomes dtr and (tautology over nf, na).
  const Gate& disj = s.gate(map[n.gate(n.output()).inputs[1]]);
  ASSERT_EQ(disj.kind, GateKind::kOr);
  const Gate& left = s.gate(disj.inputs[0]);
  ASSERT_EQ(left.kind, GateKind::kAnd);
  EXPECT_EQ(s.var_set(left.inputs[1]), FeatureSet::of(4, {2, 3}));
  expect_same_truth_table(fig.circuit, s);
  EXPECT_TRUE(check_determinism_bruteforce(s).ok());
}

TEST(Smooth, FixpointOnSmoothCircuits) {
  const Example fig;
  const Circuit s = smooth(normalize_fanin2(fig.circuit));
  EXPECT_TRUE(structurally_equal(s, smooth(s)));
}

TEST(Smooth, NonDeterministicOrStillEquivalent) {
  const auto space = FeatureSpace::binary({"x", "y"});
  CircuitBuilder b(space);
  const Circuit c = b.build(b.add_or({b.add_variable("x"), b.add_variable("y")}));
  const Circuit s = smooth(c);
  EXPECT_TRUE(is_smooth(s));
  expect_same_truth_table(c, s);
}

TEST(Transforms, PreserveSemanticsAndFlags) {
  Rng rng(21);
  for (int round = 0; round < 120; ++round) {
    const auto space = round % 3 == 0 ? testing::mixed_space(rng, 2 + round % 5, 4) : testing::binary_space(3 + round % 10);
    const Circuit c = testing::random_dd_circuit(rng, space);
    const Circuit n = normalize_fanin2(c);
    const Circuit s = smooth(n);
    EXPECT_TRUE(is_fanin2(n));
    EXPECT_TRUE(is_fanin2(s));
    EXPECT_TRUE(is_smooth(s));
    expect_same_truth_table(c, n);
    expect_same_truth_table(c, s);
    for (const Circuit* t : {&n, &s}) {
      EXPECT_TRUE(check_decomposability(*t).ok());
      EXPECT_TRUE(check_determinism_bruteforce(*t, 12).ok());
    }
    for (GateId g = 0; g < s.size(); ++g) {
      if (s.gate(g).kind == GateKind::kOr) {
        EXPECT_EQ(s.var_set(s.gate(g).inputs[0]), s.var_set(s.gate(g).inputs[1]));
      }
    }
    // Size bound |smooth(C)| <= 8 |C| (|X| + 1).
    EXPECT_LE(s.size(), 8 * n.size() * (space->size() + 1));
    expect_same_truth_table(negate(negate(c)), c);
  }
}

TEST(Smooth, SizeStaysWithinLinearFactorOnChains) {
  for (std::size_t n : {8, 16, 32, 64}) {
    const Circuit c = normalize_fanin2(testing::chain_circuit(n));
    const Circuit s = smooth(c);
    EXPECT_LE(s.size(), 4 * c.size() * n);
  }
}

TEST(InvertPolarity, VariableAndExample) {
  const auto space = FeatureSpace::binary({"x"});
  CircuitBuilder b(space);
  const Circuit inv = invert_polarity(b.build(b.add_variable("x")));
  EXPECT_TRUE(inv.evaluate(Entity::binary(space, {0})));
  EXPECT_FALSE(inv.evaluate(Entity::binary(space, {1})));

  const Example fig;
  const Circuit m = invert_polarity(fig.circuit);
  const Circuit back = invert_polarity(m);
  for_each_entity(fig.space, [&](const Entity& e) {
    EXPECT_EQ(m.evaluate(e.inverted()), fig.circuit.evaluate(e));
    EXPECT_EQ(back.evaluate(e), fig.circuit.evaluate(e));
  });
}

TEST(InvertPolarity, RejectsNonBinary) {
  auto space = std::make_shared<FeatureSpace>();
  space->add_feature("c", {"r", "g", "b"});
  CircuitBuilder b(space);
  EXPECT_CODE(invert_polarity(b.build(b.add_equality("c", "r"))), ErrorCode::kNonBinaryCircuit);
}

TEST(Negate, ConstantAndExampleCount) {
  const auto space = FeatureSpace::binary({"x"});
  CircuitBuilder b(space);
  EXPECT_FALSE(negate(b.build(b.add_constant(true))).evaluate(Entity::binary(space, {1})));
  const Example fig;
  EXPECT_EQ(model_count(Classifier::from_circuit(negate(fig.circuit))), 11);
}

}  // namespace
}  // namespace dshap
