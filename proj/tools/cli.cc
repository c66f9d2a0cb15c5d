#include "cli.h"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dshap/checks.h"
#include "dshap/error.h"
#include "dshap/graph.h"
#include "dshap/io.h"
#include "dshap/oracle.h"
#include "dshap/shap_engine.h"
#include "json.hpp"

namespace dshap::cli {
namespace {

struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void report(std::ostream& err, std::string_view code, const std::string& message,
            std::optional<std::size_t> line = std::nullopt) {
  nlohmann::ordered_json j;
  j["error"] = code;
  j["message"] = message;
  if (line) j["line"] = *line;
  err << j.dump() << '\n';
}

bool is_usage_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kForwardReference:
    case ErrorCode::kEmptyDocument:
    case ErrorCode::kBadFraction:
      return true;
    default:
      return false;
  }
}

struct ModelArgs {
  std::string circuit;
  std::string tree;
  std::string sidecar;
  bool trust_det = false;
  std::size_t max_vars = kDefaultDeterminismMaxVars;
};

void add_model_options(CLI::App* cmd, ModelArgs& a, bool need_sidecar) {
  auto* circuit = cmd->add_option("--circuit", a.circuit, "d-DNNF in NNF format");
  auto* tree = cmd->add_option("--tree", a.tree, "decision tree JSON (multi-valued features allowed)");
  circuit->excludes(tree);
  tree->excludes(circuit);
  auto* sidecar = cmd->add_option("--sidecar", a.sidecar, "features, entity and marginals (JSON)");
  if (need_sidecar) sidecar->required();
  cmd->add_flag("--trust-det", a.trust_det, "skip the exhaustive determinism check");
  cmd->add_option("--max-vars", a.max_vars, "largest var(C) checked exhaustively for determinism")
      ->capture_default_str();
}

struct Model {
  Circuit circuit;
  std::optional<SidecarSpec> sidecar;
};

Model load_model(const ModelArgs& a, bool ensure_deterministic) {
  std::optional<SidecarSpec> sidecar;
  if (!a.sidecar.empty()) sidecar = parse_sidecar(read_file(a.sidecar));
  const SpacePtr space = sidecar ? sidecar->space : nullptr;
  if (a.circuit.empty() == a.tree.empty()) throw Error(ErrorCode::kInvalidArgument, "give exactly one of --circuit, --tree");
  Circuit c = a.circuit.empty() ? encode_decision_tree(parse_tree(read_file(a.tree), space))
                                : parse_nnf(read_file(a.circuit), NnfReadOptions{space, a.trust_det});
  if (a.trust_det && !c.deterministic()) c = c.with_determinism(Determinism::kTrusted);
  if (ensure_deterministic && !c.deterministic()) c = require_deterministic(c, a.max_vars);
  return Model{std::move(c), std::move(sidecar)};
}

const Entity& require_entity(const Model& m) {
  if (!m.sidecar || !m.sidecar->entity) throw Error(ErrorCode::kMissingFeature, "sidecar has no \"entity\"");
  return *m.sidecar->entity;
}

std::vector<Rational> score_all(const Model& m, const std::string& algorithm, unsigned threads) {
  const Entity& e = require_entity(m);
  const ProductDistribution& p = m.sidecar->distribution;
  if (algorithm == "brute") return shap_bruteforce_subsets_all(Classifier::from_circuit(m.circuit), p, e);
  ShapOptions options;
  options.algorithm = algorithm == "smooth" ? Algorithm::kSmooth : Algorithm::kDynamic;
  options.threads = threads;
  return shap_all(m.circuit, p, e, options).scores;
}

Rational score_one(const Model& m, const std::string& algorithm, FeatureId x) {
  const Entity& e = require_entity(m);
  const ProductDistribution& p = m.sidecar->distribution;
  if (algorithm == "brute") return shap_bruteforce_subsets(Classifier::from_circuit(m.circuit), p, e, x);
  if (!m.circuit.space().is_binary(x)) return shap_score_nonbinary(m.circuit, p, e, x);
  return algorithm == "smooth" ? shap_score_smooth(m.circuit, p, e, x) : shap_score(m.circuit, p, e, x);
}

std::string describe(const Entity& e) {
  std::string out;
  for (FeatureId f = 0; f < e.space().size(); ++f) {
    if (f > 0) out += ' ';
    out += e.space().name(f) + "=" + e.space().domain(f)[e[f]];
  }
  return out;
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact SHAP scores over deterministic and decomposable circuits", "dshap"};
  app.require_subcommand(1);

  ModelArgs score_args;
  std::string algorithm = "dp";
  std::string feature;
  unsigned threads = 0;
  auto* score = app.add_subcommand("score", "SHAP score of every feature (or one) as exact fractions");
  add_model_options(score, score_args, true);
  score->add_option("--feature", feature, "score only this feature");
  score->add_option("--algorithm", algorithm, "dp, smooth or brute")
      ->check(CLI::IsMember({"dp", "smooth", "brute"}))
      ->capture_default_str();
  score->add_option("--threads", threads, "worker threads (0: all cores)");

  ModelArgs rank_args;
  std::string rank_algorithm = "dp";
  auto* rank = app.add_subcommand("rank", "features sorted by decreasing SHAP score");
  add_model_options(rank, rank_args, true);
  rank->add_option("--algorithm", rank_algorithm, "dp, smooth or brute")
      ->check(CLI::IsMember({"dp", "smooth", "brute"}))
      ->capture_default_str();

  ModelArgs count_args;
  auto* count = app.add_subcommand("count", "model count through the efficiency identity");
  add_model_options(count, count_args, false);

  ModelArgs verify_args;
  auto* verify = app.add_subcommand("verify", "check decomposability and determinism");
  add_model_options(verify, verify_args, false);

  std::string tree_path;
  auto* encode_dt = app.add_subcommand("encode-dt", "decision tree JSON to NNF");
  encode_dt->add_option("--tree", tree_path, "decision tree JSON")->required();

  std::string fbdd_path;
  auto* encode_fbdd_cmd = app.add_subcommand("encode-fbdd", "FBDD JSON to NNF");
  encode_fbdd_cmd->add_option("--fbdd", fbdd_path, "FBDD JSON")->required();

  auto* gen = app.add_subcommand("gen", "generate formulas and graphs");
  gen->require_subcommand(1);
  std::string theta_graph, theta_format = "dnf";
  bool theta_relaxed = false;
  auto* theta = gen->add_subcommand("theta", "2-POS-DNF with one term per non-edge");
  theta->add_option("--graph", theta_graph, "graph file")->required();
  theta->add_option("--format", theta_format, "dnf or nnf")->check(CLI::IsMember({"dnf", "nnf"}))->capture_default_str();
  theta->add_flag("--relaxed", theta_relaxed, "accept graphs with fewer than two isolated nodes");
  std::size_t gnt_n = 0, gnt_t = 0;
  auto* gnt = gen->add_subcommand("gnt", "clique on n - t nodes plus t isolated nodes");
  gnt->add_option("--n", gnt_n)->required();
  gnt->add_option("--t", gnt_t)->required();
  std::string amp_graph;
  std::size_t amp_r = 1;
  auto* amp = gen->add_subcommand("amplify", "r copies per node");
  amp->add_option("--graph", amp_graph, "graph file")->required();
  amp->add_option("--r", amp_r)->required();

  auto* closed = app.add_subcommand("closed-form", "closed-form SHAP values");
  closed->require_subcommand(1);
  std::size_t cf_n = 0, cf_t = 0;
  auto* closed_gnt = closed->add_subcommand("gnt", "SHAP of the fresh feature on not theta(G_{n,t}) and not x");
  closed_gnt->add_option("--n", cf_n)->required();
  closed_gnt->add_option("--t", cf_t)->required();
  bool cf_exact = false;
  closed_gnt->add_flag("--exact", cf_exact, "include the t singleton cliques dropped by the closed form");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report(err, "UsageError", e.what());
    return kUsageError;
  }

  try {
    if (score->parsed()) {
      const Model m = load_model(score_args, algorithm != "brute");
      const auto& space = m.circuit.space();
      if (!feature.empty()) {
        const FeatureId x = space.id(feature);
        out << feature << '\t' << to_fraction_string(score_one(m, algorithm, x)) << '\n';
      } else {
        const auto scores = score_all(m, algorithm, threads);
        for (FeatureId f = 0; f < space.size(); ++f) {
          out << space.name(f) << '\t' << to_fraction_string(scores[f]) << '\n';
        }
      }
    } else if (rank->parsed()) {
      const Model m = load_model(rank_args, rank_algorithm != "brute");
      const auto scores = score_all(m, rank_algorithm, 0);
      for (auto f : rank_features(scores)) {
        out << m.circuit.space().name(f) << '\t' << to_fraction_string(scores[f]) << '\n';
      }
    } else if (count->parsed()) {
      const Model m = load_model(count_args, true);
      const Entity e = m.sidecar && m.sidecar->entity
                           ? *m.sidecar->entity
                           : Entity(m.circuit.space_ptr(), std::vector<ValueId>(m.circuit.space().size(), 0));
      out << model_count_via_shap(m.circuit, e).get_str() << '\n';
    } else if (verify->parsed()) {
      const Model m = load_model(verify_args, false);
      bool ok = true;
      const auto dec = check_decomposability(m.circuit);
      if (dec.ok()) {
        out << "decomposable\tyes\n";
      } else {
        ok = false;
        out << "decomposable\tno\tgate " << dec.violations.front() << '\n';
      }
      const auto det = check_determinism_bruteforce(m.circuit, verify_args.max_vars);
      switch (det.status) {
        case DeterminismReport::Status::kOk:
          out << "deterministic\tyes\n";
          break;
        case DeterminismReport::Status::kViolation:
          ok = false;
          out << "deterministic\tno\tgate " << *det.gate << '\t' << describe(*det.counterexample) << '\n';
          break;
        case DeterminismReport::Status::kSkipped:
          out << "deterministic\tskipped\t|var(C)| = " << m.circuit.variables().count() << " > "
              << verify_args.max_vars << '\n';
          break;
      }
      return ok ? kOk : kValidationFailure;
    } else if (encode_dt->parsed()) {
      const auto tree = parse_tree(read_file(tree_path));
      if (!tree.space().all_binary()) {
        throw Error(ErrorCode::kNotNnfExpressible, "NNF has Boolean variables only; score multi-valued trees with 'score --tree'");
      }
      out << write_nnf(encode_fbdd(to_fbdd(tree)));
    } else if (encode_fbdd_cmd->parsed()) {
      out << write_nnf(encode_fbdd(parse_fbdd(read_file(fbdd_path))));
    } else if (theta->parsed()) {
      const auto f = build_theta(load_graph(theta_graph), ThetaOptions{!theta_relaxed});
      out << (theta_format == "dnf" ? write_dnf(f) : write_nnf(f.to_circuit()));
    } else if (gnt->parsed()) {
      out << write_graph(build_gnt(GntParams{gnt_n, gnt_t}));
    } else if (amp->parsed()) {
      out << write_graph(amplify(load_graph(amp_graph), amp_r));
    } else if (closed_gnt->parsed()) {
      const GntParams params{cf_n, cf_t};
      out << to_fraction_string(cf_exact ? gnt_shap_exact(params) : gnt_shap_closed_form(params)) << '\n';
    }
  } catch (const FileError& e) {
    report(err, "FileNotFound", e.what());
    return kUsageError;
  } catch (const ParseError& e) {
    report(err, to_string(e.code()), e.what(), e.line());
    return kUsageError;
  } catch (const Error& e) {
    report(err, to_string(e.code()), e.what());
    return is_usage_error(e.code()) ? kUsageError : kValidationFailure;
  } catch (const std::exception& e) {
    report(err, "InternalError", e.what());
    return kValidationFailure;
  }
  return kOk;
}

}  // namespace dshap::cli
