#ifndef DSHAP_ENCODERS_H_
#define DSHAP_ENCODERS_H_

#include <cstdint>
#include <vector>

#include "dshap/circuit.h"
#include "dshap/oracle.h"

namespace dshap {

using NodeIndex = std::uint32_t;

// Internal node: tests `feature`, follows `low` on 0 and `high` on 1.
struct FbddNode {
  bool leaf = false;
  bool value = false;
  FeatureId feature = 0;
  NodeIndex low = 0;
  NodeIndex high = 0;

  static FbddNode terminal(bool v) { return FbddNode{true, v, 0, 0, 0}; }
  static FbddNode test(FeatureId f, NodeIndex lo, NodeIndex hi) { return FbddNode{false, false, f, lo, hi}; }
};

// Binary decision diagram; structure (indices, acyclicity, binary features)
// is validated at construction, freeness by check_free.
class Fbdd {
 public:
  Fbdd(SpacePtr space, std::vector<FbddNode> nodes, NodeIndex root);

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<FbddNode>& nodes() const { return nodes_; }
  NodeIndex root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }

  bool evaluate(std::span<const ValueId> values) const;
  Classifier classifier() const;

 private:
  SpacePtr space_;
  std::vector<FbddNode> nodes_;
  NodeIndex root_;
};

struct FreenessReport {
  std::vector<NodeIndex> violating_path;  // root ... repeated test, empty when free
  bool ok() const { return violating_path.empty(); }
};

FreenessReport check_free(const Fbdd& d);

// Each test node u on x becomes (not x and a(low)) or (x and a(high)); shared
// nodes map to shared gates.
Circuit encode_fbdd(const Fbdd& d);

// Internal nodes have one child per domain value, in domain order.
struct TreeNode {
  bool leaf = false;
  bool value = false;
  FeatureId feature = 0;
  std::vector<NodeIndex> children;

  static TreeNode terminal(bool v) { return TreeNode{true, v, 0, {}}; }
  static TreeNode test(FeatureId f, std::vector<NodeIndex> children) { return TreeNode{false, false, f, std::move(children)}; }
};

class MultiDecisionTree {
 public:
  // Throws DomainCoverageError when a node's children do not match dom(x).
  MultiDecisionTree(SpacePtr space, std::vector<TreeNode> nodes, NodeIndex root);

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  NodeIndex root() const { return root_; }
  std::size_t size() const { return nodes_.size(); }

  bool evaluate(std::span<const ValueId> values) const;
  Classifier classifier() const;

 private:
  SpacePtr space_;
  std::vector<TreeNode> nodes_;
  NodeIndex root_;
};

FreenessReport check_free(const MultiDecisionTree& t);

// Each test node on x becomes the disjunction over v of (x = v and a(child_v)).
Circuit encode_decision_tree(const MultiDecisionTree& t);

// Same tree seen as an FBDD; every tested feature must be binary.
Fbdd to_fbdd(const MultiDecisionTree& t);

// Checks applied to encoder output: decomposability, plus exhaustive
// determinism when var(C) is small enough; otherwise determinism is trusted.
inline constexpr std::size_t kEncoderVerifyMaxVars = 12;

}  // namespace dshap

#endif  // DSHAP_ENCODERS_H_
