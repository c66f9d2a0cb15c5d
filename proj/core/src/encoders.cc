#include "dshap/encoders.h"

#include <deque>
#include <functional>
#include <optional>

#include "dshap/checks.h"
#include "dshap/error.h"

namespace dshap {
namespace {

// Uniform view over FBDD and tree nodes: leaf flag, tested feature, children.
struct NodeView {
  bool leaf;
  FeatureId feature;
  std::vector<NodeIndex> children;
};

// Topological order (children before parents) of nodes reachable from root;
// throws on cycles.
std::vector<NodeIndex> postorder(const std::vector<NodeView>& nodes, NodeIndex root) {
  enum : std::uint8_t { kWhite, kGrey, kBlack };
  std::vector<std::uint8_t> colour(nodes.size(), kWhite);
  std::vector<NodeIndex> order;
  std::vector<std::pair<NodeIndex, std::size_t>> stack{{root, 0}};
  colour[root] = kGrey;
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    if (next < nodes[u].children.size()) {
      const NodeIndex c = nodes[u].children[next++];
      if (colour[c] == kGrey) throw Error(ErrorCode::kCycleDetected, "decision diagram has a cycle");
      if (colour[c] == kWhite) {
        colour[c] = kGrey;
        stack.emplace_back(c, 0);
      }
    } else {
      colour[u] = kBlack;
      order.push_back(u);
      stack.pop_back();
    }
  }
  return order;
}

void check_structure(const std::vector<NodeView>& nodes, NodeIndex root, const FeatureSpace& space) {
  if (root >= nodes.size()) throw Error(ErrorCode::kDanglingReference, "root node does not exist");
  for (const auto& n : nodes) {
    if (n.leaf) continue;
    space.check_feature(n.feature);
    for (auto c : n.children) {
      if (c >= nodes.size()) throw Error(ErrorCode::kDanglingReference, "child node does not exist");
    }
  }
  postorder(nodes, root);
}

std::vector<NodeIndex> shortest_path(const std::vector<NodeView>& nodes, NodeIndex from,
                                     const std::function<bool(NodeIndex)>& is_target, bool skip_start) {
  std::vector<std::optional<NodeIndex>> parent(nodes.size());
  std::vector<char> seen(nodes.size(), 0);
  std::deque<NodeIndex> queue;
  seen[from] = 1;
  queue.push_back(from);
  while (!queue.empty()) {
    const NodeIndex u = queue.front();
    queue.pop_front();
    if (is_target(u) && !(skip_start && u == from)) {
      std::vector<NodeIndex> path{u};
      while (parent[path.back()]) path.push_back(*parent[path.back()]);
      return {path.rbegin(), path.rend()};
    }
    for (auto c : nodes[u].children) {
      if (seen[c]) continue;
      seen[c] = 1;
      parent[c] = u;
      queue.push_back(c);
    }
  }
  return {};
}

FreenessReport check_free_views(const std::vector<NodeView>& nodes, NodeIndex root, std::size_t feature_count) {
  const auto order = postorder(nodes, root);
  // Labels tested strictly below each node.
  std::vector<FeatureSet> below(nodes.size(), FeatureSet(feature_count));
  for (auto u : order) {
    const auto& n = nodes[u];
    for (auto c : n.children) {
      below[u] |= below[c];
      if (!nodes[c].leaf) below[u].insert(nodes[c].feature);
    }
    if (n.leaf || !below[u].contains(n.feature)) continue;
    FreenessReport report;
    report.violating_path = shortest_path(nodes, root, [&](NodeIndex v) { return v == u; }, false);
    const auto tail = shortest_path(
        nodes, u, [&](NodeIndex v) { return !nodes[v].leaf && nodes[v].feature == n.feature; }, true);
    report.violating_path.insert(report.violating_path.end(), tail.begin() + 1, tail.end());
    return report;
  }
  return {};
}

std::vector<NodeView> views(const std::vector<FbddNode>& nodes) {
  std::vector<NodeView> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) {
    out.push_back(NodeView{n.leaf, n.feature, n.leaf ? std::vector<NodeIndex>{} : std::vector<NodeIndex>{n.low, n.high}});
  }
  return out;
}

std::vector<NodeView> views(const std::vector<TreeNode>& nodes) {
  std::vector<NodeView> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(NodeView{n.leaf, n.feature, n.leaf ? std::vector<NodeIndex>{} : n.children});
  return out;
}

Circuit finish(Circuit c) {
  c = require_decomposable(c);
  if (c.variables().count() <= kEncoderVerifyMaxVars) return require_deterministic(c, kEncoderVerifyMaxVars);
  return c.with_determinism(Determinism::kTrusted);
}

}  // namespace

Fbdd::Fbdd(SpacePtr space, std::vector<FbddNode> nodes, NodeIndex root)
    : space_(std::move(space)), nodes_(std::move(nodes)), root_(root) {
  check_structure(views(nodes_), root_, *space_);
  for (const auto& n : nodes_) {
    if (!n.leaf && !space_->is_binary(n.feature)) {
      throw Error(ErrorCode::kDomainMismatch, "FBDD tests non-binary feature '" + space_->name(n.feature) + "'");
    }
  }
}

bool Fbdd::evaluate(std::span<const ValueId> values) const {
  NodeIndex u = root_;
  while (!nodes_[u].leaf) u = values[nodes_[u].feature] == 1 ? nodes_[u].high : nodes_[u].low;
  return nodes_[u].value;
}

Classifier Fbdd::classifier() const {
  auto self = std::make_shared<const Fbdd>(*this);
  return Classifier(space_, [self](std::span<const ValueId> v) { return self->evaluate(v); });
}

FreenessReport check_free(const Fbdd& d) { return check_free_views(views(d.nodes()), d.root(), d.space().size()); }

Circuit encode_fbdd(const Fbdd& d) {
  if (!check_free(d).ok()) throw Error(ErrorCode::kNotFree, "a path tests the same feature twice");
  const auto nodes = views(d.nodes());
  CircuitBuilder b(d.space_ptr());
  std::vector<std::optional<GateId>> positive(d.space().size()), negative(d.space().size());
  std::optional<GateId> constants[2];
  std::vector<GateId> alpha(d.size());
  for (auto u : postorder(nodes, d.root())) {
    const auto& n = d.nodes()[u];
    if (n.leaf) {
      auto& c = constants[n.value ? 1 : 0];
      if (!c) c = b.add_constant(n.value);
      alpha[u] = *c;
      continue;
    }
    auto& pos = positive[n.feature];
    if (!pos) pos = b.add_variable(n.feature);
    auto& neg = negative[n.feature];
    if (!neg) neg = b.add_not(*pos);
    const GateId low = b.add_and({*neg, alpha[n.low]});
    const GateId high = b.add_and({*pos, alpha[n.high]});
    alpha[u] = b.add_or({low, high});
  }
  return finish(b.build(alpha[d.root()]));
}

MultiDecisionTree::MultiDecisionTree(SpacePtr space, std::vector<TreeNode> nodes, NodeIndex root)
    : space_(std::move(space)), nodes_(std::move(nodes)), root_(root) {
  check_structure(views(nodes_), root_, *space_);
  for (const auto& n : nodes_) {
    if (!n.leaf && n.children.size() != space_->domain_size(n.feature)) {
      throw Error(ErrorCode::kDomainCoverageError,
                  "node on '" + space_->name(n.feature) + "' has " + std::to_string(n.children.size()) +
                      " children for a domain of " + std::to_string(space_->domain_size(n.feature)));
    }
  }
}

bool MultiDecisionTree::evaluate(std::span<const ValueId> values) const {
  NodeIndex u = root_;
  while (!nodes_[u].leaf) u = nodes_[u].children[values[nodes_[u].feature]];
  return nodes_[u].value;
}

Classifier MultiDecisionTree::classifier() const {
  auto self = std::make_shared<const MultiDecisionTree>(*this);
  return Classifier(space_, [self](std::span<const ValueId> v) { return self->evaluate(v); });
}

FreenessReport check_free(const MultiDecisionTree& t) {
  return check_free_views(views(t.nodes()), t.root(), t.space().size());
}

Circuit encode_decision_tree(const MultiDecisionTree& t) {
  if (!check_free(t).ok()) throw Error(ErrorCode::kNotFree, "a path tests the same feature twice");
  const auto nodes = views(t.nodes());
  CircuitBuilder b(t.space_ptr());
  std::optional<GateId> constants[2];
  std::vector<GateId> alpha(t.size());
  for (auto u : postorder(nodes, t.root())) {
    const auto& n = t.nodes()[u];
    if (n.leaf) {
      auto& c = constants[n.value ? 1 : 0];
      if (!c) c = b.add_constant(n.value);
      alpha[u] = *c;
      continue;
    }
    std::vector<GateId> cases;
    for (ValueId v = 0; v < n.children.size(); ++v) {
      cases.push_back(b.add_and({b.add_equality(n.feature, v), alpha[n.children[v]]}));
    }
    alpha[u] = b.add_or(std::move(cases));
  }
  return finish(b.build(alpha[t.root()]));
}

Fbdd to_fbdd(const MultiDecisionTree& t) {
  std::vector<FbddNode> nodes;
  nodes.reserve(t.size());
  for (const auto& n : t.nodes()) {
    if (n.leaf) {
      nodes.push_back(FbddNode::terminal(n.value));
    } else {
      if (!t.space().is_binary(n.feature)) {
        throw Error(ErrorCode::kDomainMismatch, "'" + t.space().name(n.feature) + "' is not binary");
      }
      nodes.push_back(FbddNode::test(n.feature, n.children[0], n.children[1]));
    }
  }
  return Fbdd(t.space_ptr(), std::move(nodes), t.root());
}

}  // namespace dshap
