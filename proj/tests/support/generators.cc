#include "generators.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

namespace dshap::testing {
namespace {

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

class DdGenerator {
 public:
  DdGenerator(Rng& rng, SpacePtr space, CircuitShape shape)
      : rng_(rng), space_(space), shape_(shape), b_(space), binary_(space->all_binary()) {}

  Circuit run() {
    std::vector<FeatureId> root;
    const bool partial = coin(rng_, shape_.partial_root_probability);
    for (FeatureId f = 0; f < space_->size(); ++f) {
      if (!partial || coin(rng_, 0.6)) root.push_back(f);
    }
    const GateId out = gen(root, shape_.max_depth);
    return b_.build(out).with_determinism(Determinism::kTrusted);
  }

 private:
  GateId literal(FeatureId y, ValueId v) {
    if (!binary_) return b_.add_equality(y, v);
    const GateId g = b_.add_variable(y);
    return v == 1 ? g : b_.add_not(g);
  }

  // Conjunction of one random literal per feature.
  GateId term(const std::vector<FeatureId>& vars) {
    std::vector<GateId> lits;
    for (auto y : vars) lits.push_back(literal(y, static_cast<ValueId>(pick(rng_, space_->domain_size(y)))));
    return lits.size() == 1 ? lits[0] : b_.add_and(std::move(lits));
  }

  GateId gen(const std::vector<FeatureId>& vars, std::size_t depth) {
    if (vars.empty()) return b_.add_constant(coin(rng_, 0.5));
    FeatureSet key(space_->size());
    for (auto y : vars) key.insert(y);
    auto& pool = pool_[key];
    if (!pool.empty() && coin(rng_, shape_.reuse_probability)) return pool[pick(rng_, pool.size())];

    GateId g;
    const double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (depth == 0 || vars.size() == 1) {
      g = vars.size() == 1 || coin(rng_, 0.5) ? term({vars[pick(rng_, vars.size())]}) : term(vars);
    } else if (r < 0.5) {
      g = shannon(vars, depth);
    } else if (r < 0.9) {
      g = conjunction(vars, depth);
    } else {
      g = term(vars);
    }
    if (coin(rng_, shape_.not_probability)) g = b_.add_not(g);
    pool.push_back(g);
    return g;
  }

  GateId shannon(const std::vector<FeatureId>& vars, std::size_t depth) {
    const FeatureId y = vars[pick(rng_, vars.size())];
    std::vector<ValueId> values(space_->domain_size(y));
    std::iota(values.begin(), values.end(), 0);
    std::shuffle(values.begin(), values.end(), rng_);
    const std::size_t kept = coin(rng_, 0.8) ? values.size() : 1 + pick(rng_, values.size());
    std::vector<GateId> cases;
    for (std::size_t i = 0; i < kept; ++i) {
      std::vector<FeatureId> rest;
      for (auto z : vars) {
        if (z != y && coin(rng_, 0.85)) rest.push_back(z);
      }
      const GateId lit = literal(y, values[i]);
      cases.push_back(rest.empty() && coin(rng_, 0.5) ? lit : b_.add_and({lit, gen(rest, depth - 1)}));
    }
    return cases.size() == 1 ? cases[0] : b_.add_or(std::move(cases));
  }

  GateId conjunction(std::vector<FeatureId> vars, std::size_t depth) {
    std::shuffle(vars.begin(), vars.end(), rng_);
    const std::size_t parts = std::min<std::size_t>(vars.size(), 2 + pick(rng_, 2));
    std::vector<std::vector<FeatureId>> split(parts);
    for (std::size_t i = 0; i < vars.size(); ++i) split[i < parts ? i : pick(rng_, parts)].push_back(vars[i]);
    std::vector<GateId> inputs;
    for (auto& part : split) {
      std::sort(part.begin(), part.end());
      inputs.push_back(gen(part, depth - 1));
    }
    return b_.add_and(std::move(inputs));
  }

  Rng& rng_;
  SpacePtr space_;
  CircuitShape shape_;
  CircuitBuilder b_;
  bool binary_;
  std::unordered_map<FeatureSet, std::vector<GateId>, FeatureSetHash> pool_;
};

// Ordered BDD levels over `order`: level i holds min(width, 2^i) nodes and
// every node of level i + 1 is a child of some node of level i.
std::vector<FbddNode> layered_obdd(Rng& rng, const std::vector<FeatureId>& order, std::size_t width,
                                   NodeIndex& root) {
  std::vector<FbddNode> nodes{FbddNode::terminal(false), FbddNode::terminal(true)};
  std::vector<NodeIndex> below{0, 1};
  for (std::size_t level = order.size(); level-- > 0;) {
    const std::size_t count = std::min<std::size_t>(width, std::size_t{1} << std::min<std::size_t>(level, 20));
    std::vector<NodeIndex> slots(2 * count);
    std::vector<NodeIndex> shuffled = below;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    for (std::size_t s = 0; s < slots.size(); ++s) {
      slots[s] = s < shuffled.size() ? shuffled[s] : below[pick(rng, below.size())];
    }
    std::shuffle(slots.begin(), slots.end(), rng);
    std::vector<NodeIndex> current;
    for (std::size_t i = 0; i < count; ++i) {
      nodes.push_back(FbddNode::test(order[level], slots[2 * i], slots[2 * i + 1]));
      current.push_back(static_cast<NodeIndex>(nodes.size() - 1));
    }
    below = std::move(current);
  }
  root = below[0];
  return nodes;
}

}  // namespace

SpacePtr binary_space(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
  return FeatureSpace::binary(names);
}

SpacePtr mixed_space(Rng& rng, std::size_t n, std::size_t max_domain) {
  auto space = std::make_shared<FeatureSpace>();
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t d = 2 + pick(rng, max_domain - 1);
    std::vector<std::string> domain;
    for (std::size_t v = 0; v < d; ++v) domain.push_back(d == 2 ? std::to_string(v) : "v" + std::to_string(v));
    space->add_feature("x" + std::to_string(i), std::move(domain));
  }
  return space;
}

Entity random_entity(Rng& rng, const SpacePtr& space) {
  std::vector<ValueId> values;
  for (FeatureId f = 0; f < space->size(); ++f) values.push_back(static_cast<ValueId>(pick(rng, space->domain_size(f))));
  return Entity(space, std::move(values));
}

ProductDistribution random_distribution(Rng& rng, const SpacePtr& space, unsigned max_den) {
  std::vector<std::vector<Rational>> table;
  for (FeatureId f = 0; f < space->size(); ++f) {
    const std::size_t d = space->domain_size(f);
    std::vector<unsigned long> weights(d);
    unsigned long total = 0;
    for (auto& w : weights) {
      w = coin(rng, 0.1) ? 0 : 1 + pick(rng, max_den);
      total += w;
    }
    if (total == 0) {
      weights[pick(rng, d)] = 1;
      total = 1;
    }
    std::vector<Rational> row;
    for (auto w : weights) row.push_back(fraction(BigInt(w), BigInt(total)));
    table.push_back(std::move(row));
  }
  return ProductDistribution(space, std::move(table));
}

Circuit random_dd_circuit(Rng& rng, const SpacePtr& space, const CircuitShape& shape) {
  return DdGenerator(rng, space, shape).run();
}

Fbdd random_free_tree_fbdd(Rng& rng, const SpacePtr& space, std::size_t max_depth) {
  std::vector<FbddNode> nodes;
  auto rec = [&](auto&& self, std::vector<FeatureId> available, std::size_t depth) -> NodeIndex {
    if (depth == 0 || available.empty() || coin(rng, 0.15)) {
      nodes.push_back(FbddNode::terminal(coin(rng, 0.5)));
      return static_cast<NodeIndex>(nodes.size() - 1);
    }
    const std::size_t i = pick(rng, available.size());
    const FeatureId y = available[i];
    available.erase(available.begin() + static_cast<long>(i));
    const NodeIndex lo = self(self, available, depth - 1);
    const NodeIndex hi = self(self, available, depth - 1);
    nodes.push_back(FbddNode::test(y, lo, hi));
    return static_cast<NodeIndex>(nodes.size() - 1);
  };
  std::vector<FeatureId> all(space->size());
  std::iota(all.begin(), all.end(), 0);
  const NodeIndex root = rec(rec, all, max_depth);
  return Fbdd(space, std::move(nodes), root);
}

Fbdd random_obdd(Rng& rng, const SpacePtr& space, std::size_t width) {
  std::vector<FeatureId> order(space->size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  NodeIndex root = 0;
  auto nodes = layered_obdd(rng, order, width, root);
  return Fbdd(space, std::move(nodes), root);
}

MultiDecisionTree random_tree(Rng& rng, const SpacePtr& space, std::size_t max_depth) {
  std::vector<TreeNode> nodes;
  auto rec = [&](auto&& self, std::vector<FeatureId> available, std::size_t depth) -> NodeIndex {
    if (depth == 0 || available.empty() || coin(rng, 0.15)) {
      nodes.push_back(TreeNode::terminal(coin(rng, 0.5)));
      return static_cast<NodeIndex>(nodes.size() - 1);
    }
    const std::size_t i = pick(rng, available.size());
    const FeatureId y = available[i];
    available.erase(available.begin() + static_cast<long>(i));
    std::vector<NodeIndex> children;
    for (std::size_t v = 0; v < space->domain_size(y); ++v) children.push_back(self(self, available, depth - 1));
    nodes.push_back(TreeNode::test(y, std::move(children)));
    return static_cast<NodeIndex>(nodes.size() - 1);
  };
  std::vector<FeatureId> all(space->size());
  std::iota(all.begin(), all.end(), 0);
  const NodeIndex root = rec(rec, all, max_depth);
  return MultiDecisionTree(space, std::move(nodes), root);
}

Graph random_graph(Rng& rng, std::size_t n, double edge_probability) {
  return random_graph_with_isolated(rng, n, 0, edge_probability);
}

Graph random_graph_with_isolated(Rng& rng, std::size_t n, std::size_t isolated, double edge_probability) {
  std::vector<NodeId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::vector<char> lonely(n, 0);
  for (std::size_t i = 0; i < isolated && i < n; ++i) lonely[ids[i]] = 1;
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!lonely[u] && !lonely[v] && coin(rng, edge_probability)) edges.emplace_back(u, v);
    }
  }
  return Graph(std::move(names), edges);
}

DnfFormula random_dnf(Rng& rng, const SpacePtr& space, std::size_t terms, std::size_t max_width,
                      std::optional<Polarity> polarity) {
  std::vector<Term> out;
  std::vector<FeatureId> all(space->size());
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t t = 0; t < terms; ++t) {
    std::shuffle(all.begin(), all.end(), rng);
    const std::size_t w = 1 + pick(rng, std::min(max_width, all.size()));
    Term term;
    for (std::size_t i = 0; i < w; ++i) {
      bool positive = coin(rng, 0.5);
      if (polarity == Polarity::kPositive) positive = true;
      if (polarity == Polarity::kNegative) positive = false;
      term.push_back(Literal{all[i], positive});
    }
    out.push_back(std::move(term));
  }
  FormulaClass tag = FormulaClass::any();
  if (polarity && *polarity != Polarity::kMixed) tag.polarity = polarity;
  return DnfFormula(space, std::move(out), tag);
}

CnfFormula random_neg2_cnf(Rng& rng, const SpacePtr& space, std::size_t clauses) {
  std::vector<Term> out;
  for (std::size_t c = 0; c < clauses; ++c) {
    const auto a = static_cast<FeatureId>(pick(rng, space->size()));
    Term clause{Literal{a, false}};
    if (space->size() > 1 && coin(rng, 0.8)) {
      FeatureId b = a;
      while (b == a) b = static_cast<FeatureId>(pick(rng, space->size()));
      clause.push_back(Literal{b, false});
    }
    out.push_back(std::move(clause));
  }
  return CnfFormula(space, std::move(out), FormulaClass::negative(2));
}

Circuit chain_circuit(std::size_t n) {
  const auto space = binary_space(n);
  CircuitBuilder b(space);
  GateId g = b.add_variable(FeatureId{0});
  GateId h = b.add_not(b.add_variable(FeatureId{0}));
  for (FeatureId i = 1; i < n; ++i) {
    const GateId pos = b.add_variable(i);
    const GateId neg = b.add_not(b.add_variable(i));
    const GateId next_g = b.add_or({b.add_and({pos, g}), b.add_and({neg, h})});
    if (i + 1 < n) h = b.add_or({b.add_and({pos, h}), b.add_and({neg, g})});
    g = next_g;
  }
  return b.build(g).with_determinism(Determinism::kTrusted);
}

Circuit large_circuit(Rng& rng, std::size_t features, std::size_t blocks, std::size_t width) {
  const auto space = binary_space(features);
  CircuitBuilder b(space);
  std::vector<GateId> roots;
  const std::size_t per_block = features / blocks;
  for (std::size_t blk = 0; blk < blocks; ++blk) {
    std::vector<FeatureId> order;
    const std::size_t end = blk + 1 == blocks ? features : (blk + 1) * per_block;
    for (std::size_t f = blk * per_block; f < end; ++f) order.push_back(static_cast<FeatureId>(f));
    std::shuffle(order.begin(), order.end(), rng);
    NodeIndex root = 0;
    const auto nodes = layered_obdd(rng, order, width, root);
    std::unordered_map<FeatureId, std::pair<GateId, GateId>> literals;
    std::vector<std::optional<GateId>> alpha(nodes.size());
    auto leaf = [&](NodeIndex u) {
      if (!alpha[u]) alpha[u] = b.add_constant(nodes[u].value);
      return *alpha[u];
    };
    for (NodeIndex u = 2; u < nodes.size(); ++u) {
      const auto& n = nodes[u];
      auto it = literals.find(n.feature);
      if (it == literals.end()) {
        const GateId pos = b.add_variable(n.feature);
        it = literals.emplace(n.feature, std::make_pair(pos, b.add_not(pos))).first;
      }
      const GateId lo = nodes[n.low].leaf ? leaf(n.low) : *alpha[n.low];
      const GateId hi = nodes[n.high].leaf ? leaf(n.high) : *alpha[n.high];
      alpha[u] = b.add_or({b.add_and({it->second.second, lo}), b.add_and({it->second.first, hi})});
    }
    roots.push_back(*alpha[root]);
  }
  return b.build(b.add_and(std::move(roots))).with_determinism(Determinism::kTrusted);
}

std::vector<char> truth_table(const Classifier& m) {
  const auto& space = m.space();
  std::vector<ValueId> values(space.size(), 0);
  std::vector<char> out;
  while (true) {
    out.push_back(m(values) ? 1 : 0);
    std::size_t i = space.size();
    while (i > 0) {
      --i;
      if (++values[i] < space.domain_size(static_cast<FeatureId>(i))) break;
      values[i] = 0;
      if (i == 0) return out;
    }
    if (space.size() == 0) return out;
  }
}

}  // namespace dshap::testing
