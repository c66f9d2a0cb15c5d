#ifndef DSHAP_GRAPH_H_
#define DSHAP_GRAPH_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dshap/formulas.h"

namespace dshap {

using NodeId = std::uint32_t;

// Undirected loop-free graph with named nodes.
class Graph {
 public:
  Graph(std::vector<std::string> nodes, const std::vector<std::pair<NodeId, NodeId>>& edges);

  std::size_t size() const { return names_.size(); }
  const std::string& name(NodeId v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  bool adjacent(NodeId u, NodeId v) const { return adjacency_[u][v] != 0; }
  std::size_t degree(NodeId v) const;
  std::size_t isolated_count() const;
  // Sorted (u < v) edge list.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<char>> adjacency_;
};

struct ThetaOptions {
  // When false, any graph is accepted (amplified graphs have no isolated
  // nodes). Nodes adjacent to every other node then occur in no term but stay
  // features of the formula.
  bool require_two_isolated = true;
};

// 2-POS-DNF with one term a and b per distinct non-adjacent pair; features are
// the nodes in order.
DnfFormula build_theta(const Graph& g, ThetaOptions options = {});

inline constexpr std::size_t kMaxCliqueNodes = 20;

// Cliques containing `s`; the empty set counts as a clique.
BigInt clique_count(const Graph& g, const std::vector<NodeId>& s);

// r copies per node; copies of a node form a clique and copies of adjacent
// nodes are fully connected. Copy i of node a is node a*r + i.
Graph amplify(const Graph& g, std::size_t r);

// Cliques of amplify(g, r) whose projection onto g is exactly `s`.
BigInt witness_count(const Graph& g, std::size_t r, const std::vector<NodeId>& s);

struct GntParams {
  std::size_t n = 0;
  std::size_t t = 0;
};

// a_1..a_t isolated, b_1..b_{n-t} a clique.
Graph build_gnt(GntParams params);

// t/(n(n+1)2^n) + 1/((t+1)2^{t+1}). This expression leaves the t singleton
// cliques {a_i} out of the S = {} term, so it falls short of
// SHAP(not theta(G_{n,t}) and not x, e, x) by t/(2(n+1)2^n).
Rational gnt_shap_closed_form(GntParams params);

// SHAP(not theta(G_{n,t}) and not x, e, x) exactly: the closed form plus
// t/(2(n+1)2^n). Equal at t = n - 1 and t = n, where both graphs are edgeless.
Rational gnt_shap_exact(GntParams params);

// SHAP(theta(G) or x, all-ones, x) through clique counts.
Rational shap_clique_form(const Graph& g);

}  // namespace dshap

#endif  // DSHAP_GRAPH_H_
