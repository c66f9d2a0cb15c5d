#include "dshap/graph.h"

#include <bit>

#include "dshap/error.h"

namespace dshap {
namespace {

using Mask = std::uint32_t;

std::vector<Mask> neighbour_masks(const Graph& g) {
  if (g.size() > kMaxCliqueNodes) {
    throw Error(ErrorCode::kTooLarge, "clique counting over " + std::to_string(g.size()) + " nodes");
  }
  std::vector<Mask> out(g.size(), 0);
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v = 0; v < g.size(); ++v) {
      if (g.adjacent(u, v)) out[u] |= Mask{1} << v;
    }
  }
  return out;
}

// Cliques (including the empty one) inside `candidates`.
std::uint64_t count_cliques(const std::vector<Mask>& nbrs, Mask candidates) {
  std::uint64_t total = 1;
  while (candidates != 0) {
    const int v = std::countr_zero(candidates);
    candidates &= candidates - 1;
    total += count_cliques(nbrs, candidates & nbrs[static_cast<std::size_t>(v)]);
  }
  return total;
}

}  // namespace

Graph::Graph(std::vector<std::string> nodes, const std::vector<std::pair<NodeId, NodeId>>& edges)
    : names_(std::move(nodes)), adjacency_(names_.size(), std::vector<char>(names_.size(), 0)) {
  for (const auto& [u, v] : edges) {
    if (u >= names_.size() || v >= names_.size()) {
      throw Error(ErrorCode::kDanglingReference, "edge endpoint out of range");
    }
    if (u == v) throw Error(ErrorCode::kInvalidArgument, "self-loop on node '" + names_[u] + "'");
    adjacency_[u][v] = 1;
    adjacency_[v][u] = 1;
  }
}

std::size_t Graph::degree(NodeId v) const {
  std::size_t d = 0;
  for (char a : adjacency_[v]) d += a != 0 ? 1 : 0;
  return d;
}

std::size_t Graph::isolated_count() const {
  std::size_t n = 0;
  for (NodeId v = 0; v < size(); ++v) n += degree(v) == 0 ? 1 : 0;
  return n;
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId u = 0; u < size(); ++u) {
    for (NodeId v = u + 1; v < size(); ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

DnfFormula build_theta(const Graph& g, ThetaOptions options) {
  if (options.require_two_isolated && g.isolated_count() < 2) {
    throw Error(ErrorCode::kConditionAViolated, "graph needs at least two isolated nodes");
  }
  std::vector<Term> terms;
  for (NodeId u = 0; u < g.size(); ++u) {
    for (NodeId v = u + 1; v < g.size(); ++v) {
      if (!g.adjacent(u, v)) terms.push_back({Literal{u, true}, Literal{v, true}});
    }
  }
  return DnfFormula(FeatureSpace::binary(g.names()), std::move(terms), FormulaClass::positive(2));
}

BigInt clique_count(const Graph& g, const std::vector<NodeId>& s) {
  const auto nbrs = neighbour_masks(g);
  Mask candidates = g.size() == 32 ? ~Mask{0} : (Mask{1} << g.size()) - 1;
  Mask chosen = 0;
  for (auto v : s) {
    if (v >= g.size()) throw Error(ErrorCode::kDanglingReference, "node out of range");
    if ((chosen >> v) & 1U) continue;
    if ((candidates >> v & 1U) == 0) return BigInt(0);  // s is not a clique
    chosen |= Mask{1} << v;
    candidates &= nbrs[v];
  }
  return BigInt(static_cast<unsigned long>(count_cliques(nbrs, candidates & ~chosen)));
}

Graph amplify(const Graph& g, std::size_t r) {
  if (r == 0) throw Error(ErrorCode::kParamsOutOfRange, "amplification factor must be at least 1");
  std::vector<std::string> names;
  for (NodeId a = 0; a < g.size(); ++a) {
    for (std::size_t i = 1; i <= r; ++i) names.push_back(r == 1 ? g.name(a) : g.name(a) + "_" + std::to_string(i));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto copy = [r](NodeId a, std::size_t i) { return static_cast<NodeId>(a * r + i); };
  for (NodeId a = 0; a < g.size(); ++a) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) edges.emplace_back(copy(a, i), copy(a, j));
    }
  }
  for (const auto& [a, b] : g.edges()) {
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) edges.emplace_back(copy(a, i), copy(b, j));
    }
  }
  return Graph(std::move(names), edges);
}

BigInt witness_count(const Graph& g, std::size_t r, const std::vector<NodeId>& s) {
  const Graph big = amplify(g, r);
  const auto nbrs = neighbour_masks(big);
  Mask target = 0;
  for (auto v : s) target |= Mask{1} << v;
  std::uint64_t count = 0;
  // Enumerate cliques of the amplified graph and project each onto g.
  auto visit = [&](auto&& self, Mask clique, Mask candidates) -> void {
    Mask projection = 0;
    for (Mask c = clique; c != 0; c &= c - 1) projection |= Mask{1} << (std::countr_zero(c) / static_cast<int>(r));
    if (projection == target) ++count;
    while (candidates != 0) {
      const int v = std::countr_zero(candidates);
      candidates &= candidates - 1;
      self(self, clique | (Mask{1} << v), candidates & nbrs[static_cast<std::size_t>(v)]);
    }
  };
  const Mask all = big.size() == 32 ? ~Mask{0} : (Mask{1} << big.size()) - 1;
  visit(visit, 0, all);
  return BigInt(static_cast<unsigned long>(count));
}

Graph build_gnt(GntParams params) {
  if (params.t < 2 || params.t > params.n) {
    throw Error(ErrorCode::kParamsOutOfRange, "need 2 <= t <= n");
  }
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= params.t; ++i) names.push_back("a" + std::to_string(i));
  for (std::size_t i = 1; i + params.t <= params.n; ++i) names.push_back("b" + std::to_string(i));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (auto u = static_cast<NodeId>(params.t); u < params.n; ++u) {
    for (NodeId v = u + 1; v < params.n; ++v) edges.emplace_back(u, v);
  }
  return Graph(std::move(names), edges);
}

Rational gnt_shap_closed_form(GntParams params) {
  if (params.t < 2 || params.t > params.n) {
    throw Error(ErrorCode::kParamsOutOfRange, "need 2 <= t <= n");
  }
  BigInt two_n, two_t1;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, params.n);
  mpz_ui_pow_ui(two_t1.get_mpz_t(), 2, params.t + 1);
  const Rational a = fraction(BigInt(static_cast<unsigned long>(params.t)),
                              BigInt(static_cast<unsigned long>(params.n * (params.n + 1))) * two_n);
  const Rational b = fraction(BigInt(1), BigInt(static_cast<unsigned long>(params.t + 1)) * two_t1);
  return a + b;
}

Rational gnt_shap_exact(GntParams params) {
  const Rational closed = gnt_shap_closed_form(params);
  BigInt two_n;
  mpz_ui_pow_ui(two_n.get_mpz_t(), 2, params.n);
  return closed + fraction(BigInt(static_cast<unsigned long>(params.t)),
                           BigInt(static_cast<unsigned long>(2 * (params.n + 1))) * two_n);
}

Rational shap_clique_form(const Graph& g) {
  const std::size_t n = g.size();
  if (n > kMaxCliqueNodes) throw Error(ErrorCode::kTooLarge, "clique form over too many nodes");
  std::vector<BigInt> by_size(n + 1, BigInt(0));
  for (Mask s = 0; s < (Mask{1} << n); ++s) {
    std::vector<NodeId> nodes;
    for (Mask c = s; c != 0; c &= c - 1) nodes.push_back(static_cast<NodeId>(std::countr_zero(c)));
    by_size[nodes.size()] += clique_count(g, nodes);
  }
  BigInt n_fact;
  mpz_fac_ui(n_fact.get_mpz_t(), n);
  Rational total = 0;
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt a, b, pow;
    mpz_fac_ui(a.get_mpz_t(), k);
    mpz_fac_ui(b.get_mpz_t(), n - k);
    mpz_ui_pow_ui(pow.get_mpz_t(), 2, n - k);
    total += fraction(a * b * by_size[k], n_fact * pow);
  }
  total /= Rational(BigInt(static_cast<unsigned long>(2 * (n + 1))));
  return total;
}

}  // namespace dshap
