#include <charconv>
#include <optional>
#include <sstream>

#include "dshap/error.h"
#include "dshap/io.h"

namespace dshap {
namespace {

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long long to_int(std::string_view word, std::size_t line) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), v);
  if (ec != std::errc() || ptr != word.data() + word.size()) {
    throw ParseError(ErrorCode::kParseError, line, "expected an integer, got '" + std::string(word) + "'");
  }
  return v;
}

struct Record {
  char kind;                     // 'L', 'A' or 'O'
  long long literal = 0;         // for 'L'
  std::vector<std::size_t> children;
};

}  // namespace

Circuit parse_nnf(std::string_view text, const NnfReadOptions& options) {
  bool trusted = options.trust_determinism;
  std::optional<std::size_t> node_count, edge_count, var_count;
  std::vector<Record> records;
  std::size_t edges_seen = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto words = split_words(line);
    if (words.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (words[0] == "c") {
      for (std::size_t i = 1; i < words.size(); ++i) {
        if (words[i] == "d-DNNF") trusted = true;
      }
      continue;
    }
    if (!node_count) {
      if (words[0] != "nnf" || words.size() != 4) {
        throw ParseError(ErrorCode::kParseError, line_no, "expected header 'nnf <nodes> <edges> <vars>'");
      }
      const long long n = to_int(words[1], line_no), e = to_int(words[2], line_no), v = to_int(words[3], line_no);
      if (n < 1 || e < 0 || v < 0) throw ParseError(ErrorCode::kParseError, line_no, "negative or empty header count");
      node_count = static_cast<std::size_t>(n);
      edge_count = static_cast<std::size_t>(e);
      var_count = static_cast<std::size_t>(v);
      continue;
    }
    if (records.size() == *node_count) {
      throw ParseError(ErrorCode::kParseError, line_no, "more node records than declared");
    }
    const std::size_t self = records.size();
    auto child = [&](std::string_view w) {
      const long long c = to_int(w, line_no);
      if (c < 0) throw ParseError(ErrorCode::kParseError, line_no, "negative node reference");
      if (static_cast<std::size_t>(c) >= self) {
        if (static_cast<std::size_t>(c) < *node_count) {
          throw ParseError(ErrorCode::kForwardReference, line_no,
                           "node " + std::to_string(self) + " refers to later node " + std::to_string(c));
        }
        throw ParseError(ErrorCode::kParseError, line_no, "reference to node " + std::to_string(c) + " out of range");
      }
      return static_cast<std::size_t>(c);
    };
    Record r{words[0].size() == 1 ? words[0][0] : '?', 0, {}};
    std::size_t first_child = 0;
    if (r.kind == 'L') {
      if (words.size() != 2) throw ParseError(ErrorCode::kParseError, line_no, "literal record is 'L <lit>'");
      r.literal = to_int(words[1], line_no);
      if (r.literal == 0 || static_cast<std::size_t>(r.literal < 0 ? -r.literal : r.literal) > *var_count) {
        throw ParseError(ErrorCode::kParseError, line_no, "literal " + std::string(words[1]) + " out of range");
      }
      records.push_back(std::move(r));
      continue;
    } else if (r.kind == 'A') {
      first_child = 2;
    } else if (r.kind == 'O') {
      first_child = 3;
      if (words.size() < 3) throw ParseError(ErrorCode::kParseError, line_no, "or record is 'O <j> <c> <children>'");
      to_int(words[1], line_no);
    } else {
      throw ParseError(ErrorCode::kParseError, line_no, "unknown record '" + std::string(words[0]) + "'");
    }
    if (words.size() < first_child) throw ParseError(ErrorCode::kParseError, line_no, "missing child count");
    const long long c = to_int(words[first_child - 1], line_no);
    if (c < 0 || static_cast<std::size_t>(c) != words.size() - first_child) {
      throw ParseError(ErrorCode::kParseError, line_no, "child count does not match the record");
    }
    for (std::size_t i = first_child; i < words.size(); ++i) r.children.push_back(child(words[i]));
    edges_seen += r.children.size();
    records.push_back(std::move(r));
  }
  if (!node_count) throw ParseError(ErrorCode::kEmptyDocument, line_no, "no 'nnf' header");
  if (records.size() != *node_count) {
    throw ParseError(ErrorCode::kParseError, line_no,
                     "header declares " + std::to_string(*node_count) + " nodes, found " +
                         std::to_string(records.size()));
  }
  if (edges_seen != *edge_count) {
    throw ParseError(ErrorCode::kParseError, line_no,
                     "header declares " + std::to_string(*edge_count) + " edges, found " + std::to_string(edges_seen));
  }

  SpacePtr space = options.space;
  if (!space) {
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= *var_count; ++i) names.push_back("x" + std::to_string(i));
    space = FeatureSpace::binary(names);
  } else if (space->size() < *var_count) {
    throw Error(ErrorCode::kMissingFeature, "document uses " + std::to_string(*var_count) + " variables, sidecar declares " +
                                                std::to_string(space->size()));
  }

  // Keep only nodes reachable from the root so the circuit has a single sink.
  std::vector<char> live(records.size(), 0);
  live.back() = 1;
  for (std::size_t i = records.size(); i-- > 0;) {
    if (!live[i]) continue;
    for (auto c : records[i].children) live[c] = 1;
  }
  CircuitBuilder b(space);
  std::vector<GateId> gate_of(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!live[i]) continue;
    const Record& r = records[i];
    if (r.kind == 'L') {
      const auto f = static_cast<FeatureId>((r.literal < 0 ? -r.literal : r.literal) - 1);
      const GateId v = b.add_variable(f);
      gate_of[i] = r.literal > 0 ? v : b.add_not(v);
      continue;
    }
    if (r.children.empty()) {
      gate_of[i] = b.add_constant(r.kind == 'A');
      continue;
    }
    std::vector<GateId> inputs;
    for (auto c : r.children) inputs.push_back(gate_of[c]);
    gate_of[i] = r.kind == 'A' ? b.add_and(std::move(inputs)) : b.add_or(std::move(inputs));
  }
  Circuit c = b.build(gate_of.back());
  return trusted ? c.with_determinism(Determinism::kTrusted) : c;
}

std::string write_nnf(const Circuit& c) {
  if (!c.is_binary()) throw Error(ErrorCode::kNotNnfExpressible, "circuit has equality gates");
  std::vector<std::string> lines;
  std::size_t edges = 0;
  std::optional<std::size_t> constants[2];
  std::vector<std::optional<std::size_t>> pos_lit(c.space().size()), neg_lit(c.space().size());
  // Node index of each gate and of its negation, built on demand.
  std::vector<std::optional<std::size_t>> node(c.size()), neg_node(c.size());
  bool pushed = false;

  auto constant = [&](bool v) {
    auto& slot = constants[v ? 1 : 0];
    if (!slot) {
      slot = lines.size();
      lines.push_back(v ? "A 0" : "O 0 0");
    }
    return *slot;
  };
  auto literal = [&](FeatureId f, bool positive) {
    auto& slot = positive ? pos_lit[f] : neg_lit[f];
    if (!slot) {
      slot = lines.size();
      lines.push_back("L " + std::string(positive ? "" : "-") + std::to_string(f + 1));
    }
    return *slot;
  };
  auto emit = [&](char kind, const std::vector<std::size_t>& children) {
    std::ostringstream s;
    s << kind << (kind == 'O' ? " 0 " : " ") << children.size();
    for (auto ch : children) s << ' ' << ch;
    edges += children.size();
    lines.push_back(s.str());
    return lines.size() - 1;
  };

  // Phases needed per gate, propagated from the output; negations are
  // pushed to the leaves by De Morgan.
  std::vector<char> need_pos(c.size(), 0), need_neg(c.size(), 0);
  need_pos[c.output()] = 1;
  const auto order = c.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Gate& g = c.gate(*it);
    if (g.kind == GateKind::kNot) {
      if (need_pos[*it]) need_neg[g.inputs[0]] = 1;
      if (need_neg[*it]) need_pos[g.inputs[0]] = 1;
    } else if (g.kind == GateKind::kAnd || g.kind == GateKind::kOr) {
      for (auto in : g.inputs) {
        if (need_pos[*it]) need_pos[in] = 1;
        if (need_neg[*it]) need_neg[in] = 1;
      }
    }
  }

  for (auto g_id : order) {
    const Gate& g = c.gate(g_id);
    switch (g.kind) {
      case GateKind::kConstant:
        if (need_pos[g_id]) node[g_id] = constant(g.value != 0);
        if (need_neg[g_id]) neg_node[g_id] = constant(g.value == 0);
        break;
      case GateKind::kVariable:
        if (need_pos[g_id]) node[g_id] = literal(g.feature, true);
        if (need_neg[g_id]) neg_node[g_id] = literal(g.feature, false);
        break;
      case GateKind::kNot:
        if (need_pos[g_id]) node[g_id] = neg_node[g.inputs[0]];
        if (need_neg[g_id]) neg_node[g_id] = node[g.inputs[0]];
        break;
      case GateKind::kAnd:
      case GateKind::kOr: {
        const char kind = g.kind == GateKind::kAnd ? 'A' : 'O';
        if (need_pos[g_id]) {
          std::vector<std::size_t> ch;
          for (auto in : g.inputs) ch.push_back(*node[in]);
          node[g_id] = emit(kind, ch);
        }
        if (need_neg[g_id]) {
          pushed = true;
          std::vector<std::size_t> ch;
          for (auto in : g.inputs) ch.push_back(*neg_node[in]);
          neg_node[g_id] = emit(kind == 'A' ? 'O' : 'A', ch);
        }
        break;
      }
      case GateKind::kEquality:
        throw Error(ErrorCode::kNotNnfExpressible, "circuit has equality gates");
    }
  }
  // The root has to be the last record.
  std::size_t root = *node[c.output()];
  if (root != lines.size() - 1) {
    root = emit('A', {root});
  }

  std::ostringstream out;
  // De Morgan pushing can break determinism, so the flag is only kept when
  // every Not already sat on a leaf.
  if (c.deterministic() && !pushed) out << "c d-DNNF\n";
  out << "nnf " << lines.size() << ' ' << edges << ' ' << c.space().size() << '\n';
  for (const auto& l : lines) out << l << '\n';
  return out.str();
}

}  // namespace dshap
