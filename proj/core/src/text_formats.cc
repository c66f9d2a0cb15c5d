#include <charconv>
#include <sstream>

#include "dshap/error.h"
#include "dshap/io.h"
#include "json_util.h"

namespace dshap {
namespace {

using detail::Json;

std::size_t parse_index(std::string_view word, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw ParseError(ErrorCode::kParseError, line, "expected a non-negative integer, got '" + std::string(word) + "'");
  }
  return v;
}

// Leaves are 0/1 (numbers, booleans or the strings "0"/"1").
std::optional<bool> leaf_value(const Json& j) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    const long v = j.get<long>();
    if (v == 0 || v == 1) return v == 1;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "0" || s == "1") return s == "1";
  }
  if (j.is_object() && j.contains("leaf")) return leaf_value(j["leaf"]);
  return std::nullopt;
}

// Collects features (preorder) and child keys when no space is declared.
void infer_domains(const Json& j, std::vector<std::string>& names, std::vector<std::vector<std::string>>& domains) {
  if (leaf_value(j)) return;
  if (!j.is_object() || !j.contains("feature") || !j.contains("children") || !j["children"].is_object()) {
    throw ParseError(ErrorCode::kParseError, 0, "tree nodes are 0/1 or {\"feature\", \"children\"}");
  }
  const auto name = j["feature"].get<std::string>();
  std::vector<std::string> keys;
  for (const auto& [k, _] : j["children"].items()) keys.push_back(k);
  if (keys.size() == 2 && keys[0] == "1" && keys[1] == "0") std::swap(keys[0], keys[1]);
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) {
    names.push_back(name);
    domains.push_back(keys);
  } else {
    auto& dom = domains[static_cast<std::size_t>(it - names.begin())];
    for (const auto& k : keys) {
      if (std::find(dom.begin(), dom.end(), k) == dom.end()) dom.push_back(k);
    }
  }
  for (const auto& [_, child] : j["children"].items()) infer_domains(child, names, domains);
}

NodeIndex build_tree(const Json& j, const FeatureSpace& space, std::vector<TreeNode>& nodes) {
  if (auto v = leaf_value(j)) {
    nodes.push_back(TreeNode::terminal(*v));
    return static_cast<NodeIndex>(nodes.size() - 1);
  }
  const FeatureId f = space.id(j["feature"].get<std::string>());
  const auto& children = j["children"];
  std::vector<std::optional<NodeIndex>> slots(space.domain_size(f));
  for (const auto& [k, child] : children.items()) {
    const ValueId v = space.value_id(f, k);
    if (slots[v]) throw ParseError(ErrorCode::kParseError, 0, "repeated branch '" + k + "'");
    slots[v] = build_tree(child, space, nodes);
  }
  std::vector<NodeIndex> kids;
  for (ValueId v = 0; v < slots.size(); ++v) {
    if (!slots[v]) {
      throw Error(ErrorCode::kDomainCoverageError,
                  "node on '" + space.name(f) + "' has no branch for '" + space.domain(f)[v] + "'");
    }
    kids.push_back(*slots[v]);
  }
  nodes.push_back(TreeNode::test(f, std::move(kids)));
  return static_cast<NodeIndex>(nodes.size() - 1);
}

}  // namespace

Graph parse_graph(std::string_view text) {
  std::optional<std::size_t> n;
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::vector<std::string> w;
    for (std::string s; words >> s;) w.push_back(s);
    if (w.empty() || w[0] == "c") continue;
    if (!n) {
      if (w.size() != 3 || w[0] != "p" || w[1] != "nodes") {
        throw ParseError(ErrorCode::kParseError, line_no, "expected header 'p nodes <N>'");
      }
      n = parse_index(w[2], line_no);
      continue;
    }
    if (w.size() != 2) throw ParseError(ErrorCode::kParseError, line_no, "edge lines are 'u v'");
    const std::size_t u = parse_index(w[0], line_no), v = parse_index(w[1], line_no);
    if (u < 1 || v < 1 || u > *n || v > *n) {
      throw ParseError(ErrorCode::kParseError, line_no, "node out of range 1.." + std::to_string(*n));
    }
    if (u == v) throw ParseError(ErrorCode::kParseError, line_no, "self-loop");
    edges.emplace_back(static_cast<NodeId>(u - 1), static_cast<NodeId>(v - 1));
  }
  if (!n) throw ParseError(ErrorCode::kEmptyDocument, line_no, "no 'p nodes' header");
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= *n; ++i) names.push_back(std::to_string(i));
  return Graph(std::move(names), edges);
}

std::string write_graph(const Graph& g) {
  std::ostringstream out;
  out << "c nodes";
  for (const auto& name : g.names()) out << ' ' << name;
  out << "\np nodes " << g.size() << '\n';
  for (const auto& [u, v] : g.edges()) out << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

MultiDecisionTree parse_tree(std::string_view text, SpacePtr space) {
  return detail::with_json_errors([&] {
    const Json doc = detail::parse_json(text);
    const bool wrapped = doc.is_object() && doc.contains("tree");
    const Json& root = wrapped ? doc["tree"] : doc;
    if (!space) {
      auto declared = std::make_shared<FeatureSpace>();
      if (wrapped && doc.contains("features")) {
        detail::add_declared_features(*declared, doc["features"]);
      } else {
        std::vector<std::string> names;
        std::vector<std::vector<std::string>> domains;
        infer_domains(root, names, domains);
        for (std::size_t i = 0; i < names.size(); ++i) {
          auto& dom = domains[i];
          if (dom.size() == 1) dom.push_back(dom[0] == "0" ? "1" : "0");
          if (dom.size() == 2 && dom[0] == "1" && dom[1] == "0") std::swap(dom[0], dom[1]);
          declared->add_feature(names[i], dom);
        }
      }
      space = declared;
    }
    std::vector<TreeNode> nodes;
    const NodeIndex r = build_tree(root, *space, nodes);
    return MultiDecisionTree(space, std::move(nodes), r);
  });
}

Fbdd parse_fbdd(std::string_view text, SpacePtr space) {
  return detail::with_json_errors([&] {
    const Json doc = detail::parse_json(text);
    if (!(doc.is_object() && doc.contains("nodes"))) return to_fbdd(parse_tree(text, std::move(space)));
    const Json& list = doc["nodes"];
    if (!list.is_array() || list.empty()) throw ParseError(ErrorCode::kParseError, 0, "\"nodes\" must be a non-empty array");
    if (!space) {
      auto declared = std::make_shared<FeatureSpace>();
      if (doc.contains("features")) {
        detail::add_declared_features(*declared, doc["features"]);
      } else {
        for (const auto& n : list) {
          if (n.contains("feature") && !declared->find(n["feature"].get<std::string>())) {
            declared->add_binary_feature(n["feature"].get<std::string>());
          }
        }
      }
      space = declared;
    }
    std::vector<FbddNode> nodes;
    for (const auto& n : list) {
      if (auto v = leaf_value(n)) {
        nodes.push_back(FbddNode::terminal(*v));
      } else if (n.is_object() && n.contains("feature") && n.contains("low") && n.contains("high")) {
        nodes.push_back(FbddNode::test(space->id(n["feature"].get<std::string>()), n["low"].get<NodeIndex>(),
                                       n["high"].get<NodeIndex>()));
      } else {
        throw ParseError(ErrorCode::kParseError, 0, "FBDD nodes are {\"leaf\"} or {\"feature\", \"low\", \"high\"}");
      }
    }
    const NodeIndex root = doc.value("root", NodeIndex{0});
    return Fbdd(space, std::move(nodes), root);
  });
}

std::string write_dnf(const DnfFormula& f) {
  std::ostringstream out;
  out << "c features";
  for (FeatureId i = 0; i < f.space().size(); ++i) out << ' ' << f.space().name(i);
  out << "\np dnf " << f.space().size() << ' ' << f.terms().size() << '\n';
  for (const auto& term : f.terms()) {
    for (const auto& lit : term) out << (lit.positive ? "" : "-") << lit.feature + 1 << ' ';
    out << "0\n";
  }
  return out.str();
}

}  // namespace dshap
