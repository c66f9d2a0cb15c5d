#ifndef DSHAP_IO_H_
#define DSHAP_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "dshap/circuit.h"
#include "dshap/encoders.h"
#include "dshap/formulas.h"
#include "dshap/graph.h"

namespace dshap {

// c2d-style NNF: header `nnf <nodes> <edges> <vars>`, then one record per
// node (`L i`, `A c g..`, `O j c g..`), the last node being the root.
// Variable i maps to feature i-1 of `space` (default names x1..xV).
struct NnfReadOptions {
  SpacePtr space;
  bool trust_determinism = false;
};

Circuit parse_nnf(std::string_view text, const NnfReadOptions& options = {});

// Binary circuits whose Not gates sit on variables (or constants / other Not
// gates); throws NotNnfExpressible otherwise. Emits `c d-DNNF` for circuits
// whose determinism is trusted or verified.
std::string write_nnf(const Circuit& c);

struct SidecarSpec {
  SpacePtr space;
  std::optional<Entity> entity;
  ProductDistribution distribution;
};

// {"features": [...], "entity": {...}, "marginals": {...}} or "uniform": true.
SidecarSpec parse_sidecar(std::string_view text);

// `p nodes N` followed by `u v` edge lines, nodes numbered from 1.
Graph parse_graph(std::string_view text);
std::string write_graph(const Graph& g);

// Nested {"feature": name, "children": {value: subtree}} with 0/1 leaves,
// optionally wrapped as {"features": [...], "tree": subtree}. Without a
// declared space, domains are read off the children keys.
MultiDecisionTree parse_tree(std::string_view text, SpacePtr space = nullptr);

// {"features": [...], "nodes": [{"leaf": b} | {"feature": f, "low": i, "high": j}], "root": r},
// or a nested binary tree.
Fbdd parse_fbdd(std::string_view text, SpacePtr space = nullptr);

// DIMACS-like term list: `c features <names>`, `p dnf V T`, terms ending in 0.
std::string write_dnf(const DnfFormula& f);

}  // namespace dshap

#endif  // DSHAP_IO_H_
