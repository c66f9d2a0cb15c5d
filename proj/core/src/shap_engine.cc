#include "dshap/shap_engine.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "dshap/checks.h"
#include "dshap/error.h"
#include "dshap/transforms.h"

namespace dshap {
namespace {

// Tables are kept as integer numerators over a per-gate common denominator
// (the product of the marginal denominators of var(g) \ {x}), which avoids a
// gcd per arithmetic step. Values are turned into rationals at the output.
class Context {
 public:
  Context(const Circuit& c, const ProductDistribution& p, const Entity& e)
      : circuit_(c), entity_(e), binom_(c.space().size()) {
    const auto n = c.space().size();
    denominators_.resize(n);
    numerators_.resize(n);
    for (FeatureId f = 0; f < n; ++f) {
      BigInt q = 1;
      for (const auto& prob : p.marginal(f)) mpz_lcm(q.get_mpz_t(), q.get_mpz_t(), prob.get_den_mpz_t());
      for (const auto& prob : p.marginal(f)) {
        BigInt num = q / prob.get_den();
        num *= prob.get_num();
        numerators_[f].push_back(std::move(num));
      }
      denominators_[f] = std::move(q);
    }
  }

  const Circuit& circuit() const { return circuit_; }
  const Entity& entity() const { return entity_; }
  const BinomialTable& binom() const { return binom_; }
  const BigInt& denominator(FeatureId f) const { return denominators_[f]; }
  const BigInt& numerator(FeatureId f, ValueId v) const { return numerators_[f][v]; }

 private:
  const Circuit& circuit_;
  const Entity& entity_;
  BinomialTable binom_;
  std::vector<BigInt> denominators_;
  std::vector<std::vector<BigInt>> numerators_;
};

enum class OrRule { kConvolve, kSmoothOnly };

using Row = std::vector<BigInt>;

struct Table {
  BigInt scale;
  std::size_t width = 0;  // |var(g) \ {x}|
  bool depends_on_x = false;
  std::vector<Row> rows;  // one per branch when depends_on_x, else one shared row

  const Row& row(std::size_t branch) const { return depends_on_x ? rows[branch] : rows[0]; }
};

void convolve_into(Row& out, const Row& a, const Row& b, std::uint64_t& mults) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  mults += static_cast<std::uint64_t>(a.size()) * b.size();
}

class Pass {
 public:
  Pass(const Context& ctx, std::optional<FeatureId> x, std::vector<ValueId> branches, OrRule rule, bool keep_all,
       EngineStats* stats)
      : ctx_(ctx), c_(ctx.circuit()), x_(x), branches_(std::move(branches)), rule_(rule), keep_all_(keep_all),
        stats_(stats) {
    if (!x_) branches_.assign(1, 0);
  }

  // Padded output rows, one per branch, with their common denominator.
  std::pair<std::vector<Row>, BigInt> run() {
    tables_.assign(c_.size(), Table{});
    const auto order = c_.topological_order();
    std::vector<std::size_t> last_use(c_.size(), 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      for (auto in : c_.gate(order[pos]).inputs) last_use[in] = pos;
    }
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      const GateId g = order[pos];
      visit(g);
      if (keep_all_) continue;
      for (auto in : c_.gate(g).inputs) {
        if (last_use[in] == pos && in != c_.output()) tables_[in].rows = {};
      }
    }
    const Table& out = tables_[c_.output()];
    const std::size_t total = c_.space().size() - (x_ ? 1 : 0);
    const std::size_t pad = total - out.width;
    std::vector<Row> rows;
    for (std::size_t b = 0; b < branches_.size(); ++b) {
      if (pad == 0) {
        rows.push_back(out.row(b));
        continue;
      }
      Row padded(total + 1);
      convolve_into(padded, out.row(b), ctx_.binom().row(pad), mults_);
      rows.push_back(std::move(padded));
    }
    if (stats_ != nullptr) {
      stats_->multiplications += mults_;
      stats_->gate_visits += c_.size();
    }
    return {std::move(rows), out.scale};
  }

  const std::vector<Table>& tables() const { return tables_; }

 private:
  bool has_x(GateId g) const { return x_ && c_.var_set(g).contains(*x_); }

  std::size_t width(GateId g) const { return c_.var_set(g).count() - (has_x(g) ? 1 : 0); }

  // Product of denominators over (var(g) \ var(sub)) \ {x}.
  BigInt missing_scale(GateId g, GateId sub) const {
    BigInt f = 1;
    const auto wg = c_.var_set(g).words();
    const auto ws = c_.var_set(sub).words();
    for (std::size_t i = 0; i < wg.size(); ++i) {
      auto w = wg[i] & ~ws[i];
      while (w != 0) {
        const auto feature = static_cast<FeatureId>(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
        if (x_ && feature == *x_) continue;
        f *= ctx_.denominator(feature);
      }
    }
    return f;
  }

  void visit(GateId id) {
    const Gate& g = c_.gate(id);
    Table& t = tables_[id];
    t.width = width(id);
    t.depends_on_x = has_x(id);
    switch (g.kind) {
      case GateKind::kConstant:
        t.scale = 1;
        t.rows.assign(1, Row{BigInt(g.value)});
        break;
      case GateKind::kVariable:
      case GateKind::kEquality: {
        const FeatureId y = g.feature;
        const ValueId v = g.kind == GateKind::kVariable ? 1 : g.value;
        if (x_ && y == *x_) {
          t.scale = 1;
          for (auto branch : branches_) t.rows.push_back(Row{BigInt(branch == v ? 1 : 0)});
        } else {
          t.scale = ctx_.denominator(y);
          const bool agrees = ctx_.entity()[y] == v;
          t.rows.assign(1, Row{ctx_.numerator(y, v), agrees ? t.scale : BigInt(0)});
        }
        break;
      }
      case GateKind::kNot: {
        const Table& in = tables_[g.inputs[0]];
        t.scale = in.scale;
        const auto& binom = ctx_.binom().row(t.width);
        for (const auto& r : in.rows) {
          Row out(t.width + 1);
          for (std::size_t l = 0; l <= t.width; ++l) {
            mpz_mul(out[l].get_mpz_t(), binom[l].get_mpz_t(), t.scale.get_mpz_t());
            out[l] -= r[l];
          }
          t.rows.push_back(std::move(out));
        }
        break;
      }
      case GateKind::kAnd: {
        const Table& a = tables_[g.inputs[0]];
        const Table& b = tables_[g.inputs[1]];
        t.scale = a.scale * b.scale;
        const std::size_t count = t.depends_on_x ? branches_.size() : 1;
        for (std::size_t br = 0; br < count; ++br) {
          Row out(t.width + 1);
          convolve_into(out, a.row(br), b.row(br), mults_);
          t.rows.push_back(std::move(out));
        }
        break;
      }
      case GateKind::kOr:
        visit_or(id, g, t);
        break;
    }
  }

  void visit_or(GateId id, const Gate& g, Table& t) {
    const GateId g1 = g.inputs[0];
    const GateId g2 = g.inputs[1];
    const Table& a = tables_[g1];
    const Table& b = tables_[g2];
    const std::size_t count = t.depends_on_x ? branches_.size() : 1;
    if (rule_ == OrRule::kSmoothOnly) {
      if (a.width != t.width || b.width != t.width || a.depends_on_x != b.depends_on_x) {
        throw Error(ErrorCode::kNotSmooth, "Or gate " + std::to_string(id) + " is not smooth");
      }
      t.scale = a.scale;
      for (std::size_t br = 0; br < count; ++br) {
        Row out = a.row(br);
        for (std::size_t l = 0; l <= t.width; ++l) out[l] += b.row(br)[l];
        t.rows.push_back(std::move(out));
      }
      return;
    }
    // Each side is completed over the variables it misses: those contribute
    // binom(missing, j) at index j and their denominators to the scale.
    auto lift = [&](const Table& side, GateId sub) {
      const std::size_t missing = t.width - side.width;
      const BigInt factor = missing_scale(id, sub);
      const std::size_t n = side.depends_on_x ? branches_.size() : 1;
      std::vector<Row> lifted;
      for (std::size_t br = 0; br < n; ++br) {
        Row r;
        if (missing == 0) {
          r = side.row(br);
        } else {
          r.assign(t.width + 1, BigInt(0));
          convolve_into(r, side.row(br), ctx_.binom().row(missing), mults_);
        }
        if (factor != 1) {
          for (auto& v : r) v *= factor;
        }
        lifted.push_back(std::move(r));
      }
      return std::make_pair(std::move(lifted), BigInt(side.scale * factor));
    };
    auto [left, scale] = lift(a, g1);
    auto [right, unused] = lift(b, g2);
    (void)unused;
    t.scale = std::move(scale);
    for (std::size_t br = 0; br < count; ++br) {
      Row out = left.size() == 1 ? left[0] : std::move(left[br]);
      const Row& r = right[right.size() == 1 ? 0 : br];
      for (std::size_t l = 0; l <= t.width; ++l) out[l] += r[l];
      t.rows.push_back(std::move(out));
    }
  }

  const Context& ctx_;
  const Circuit& c_;
  std::optional<FeatureId> x_;
  std::vector<ValueId> branches_;
  OrRule rule_;
  bool keep_all_;
  EngineStats* stats_;
  std::vector<Table> tables_;
  std::uint64_t mults_ = 0;
};

std::vector<Rational> to_rationals(const Row& row, const BigInt& scale) {
  std::vector<Rational> out;
  out.reserve(row.size());
  for (const auto& v : row) {
    Rational r(v, scale);
    r.canonicalize();
    out.push_back(std::move(r));
  }
  return out;
}

void check_inputs(const Circuit& c, const ProductDistribution& p, const Entity& e) {
  if (!(p.space() == c.space()) || !(e.space() == c.space())) {
    throw Error(ErrorCode::kDomainMismatch, "distribution and entity must share the circuit's feature space");
  }
}

// Fan-in-2 normalization plus the structural/semantic preconditions.
Circuit prepare(const Circuit& c, const ProductDistribution& p, const Entity& e) {
  check_inputs(c, p, e);
  if (!c.deterministic()) {
    throw Error(ErrorCode::kDeterminismUnverified, "circuit determinism is neither trusted nor verified");
  }
  return normalize_fanin2(require_decomposable(c));
}

struct Prepared {
  Circuit circuit;
  OrRule rule;
};

Prepared prepare_for(Algorithm algorithm, const Circuit& c, const ProductDistribution& p, const Entity& e) {
  Circuit fanin2 = prepare(c, p, e);
  if (algorithm == Algorithm::kSmooth) return {smooth(fanin2), OrRule::kSmoothOnly};
  return {std::move(fanin2), OrRule::kConvolve};
}

// (e(x) - p(x)) * sum_k w_k (gamma_k - delta_k), with gamma/delta scaled by `scale`.
Rational binary_score(const Context& ctx, const ProductDistribution& p, FeatureId x, OrRule rule,
                      EngineStats* stats) {
  Pass pass(ctx, x, {1, 0}, rule, false, stats);
  auto [rows, scale] = pass.run();
  const auto n = ctx.circuit().space().size();
  const auto weights = shapley_weights(n);
  Rational sum = 0;
  BigInt diff;
  for (std::size_t k = 0; k < n; ++k) {
    diff = rows[0][k] - rows[1][k];
    if (diff == 0) continue;
    sum += weights[k] * Rational(diff);
  }
  sum /= scale;
  const Rational ex = ctx.entity()[x] == 1 ? Rational(1) : Rational(0);
  return (ex - p.p(x)) * sum;
}

Rational multivalued_score(const Context& ctx, const ProductDistribution& p, FeatureId x, OrRule rule,
                           EngineStats* stats) {
  const auto& space = ctx.circuit().space();
  std::vector<ValueId> branches(space.domain_size(x));
  for (ValueId v = 0; v < branches.size(); ++v) branches[v] = v;
  Pass pass(ctx, x, branches, rule, false, stats);
  auto [rows, scale] = pass.run();
  const auto n = space.size();
  const auto weights = shapley_weights(n);
  const ValueId ev = ctx.entity()[x];
  Rational sum = 0;
  for (std::size_t k = 0; k < n; ++k) {
    Rational diff(rows[ev][k]);
    for (ValueId v = 0; v < branches.size(); ++v) diff -= p.probability(x, v) * Rational(rows[v][k]);
    sum += weights[k] * diff;
  }
  sum /= scale;
  return sum;
}

Rational score_feature(const Context& ctx, const ProductDistribution& p, FeatureId x, OrRule rule,
                       EngineStats* stats) {
  if (ctx.circuit().space().is_binary(x)) return binary_score(ctx, p, x, rule, stats);
  return multivalued_score(ctx, p, x, rule, stats);
}

}  // namespace

Rational shap_score(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                    EngineStats* stats) {
  c.space().check_feature(x);
  if (!c.space().is_binary(x)) {
    throw Error(ErrorCode::kDomainMismatch, "'" + c.space().name(x) + "' is not binary; use shap_score_nonbinary");
  }
  const Circuit prepared = prepare(c, p, e);
  const Context ctx(prepared, p, e);
  return binary_score(ctx, p, x, OrRule::kConvolve, stats);
}

Rational shap_score_smooth(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                           EngineStats* stats) {
  c.space().check_feature(x);
  if (!c.space().is_binary(x)) {
    throw Error(ErrorCode::kDomainMismatch, "'" + c.space().name(x) + "' is not binary");
  }
  const Circuit smoothed = smooth(prepare(c, p, e));
  const Context ctx(smoothed, p, e);
  return binary_score(ctx, p, x, OrRule::kSmoothOnly, stats);
}

SmoothTrace shap_score_smooth_traced(const Circuit& c, const ProductDistribution& p, const Entity& e,
                                     FeatureId x) {
  c.space().check_feature(x);
  if (!c.space().is_binary(x)) {
    throw Error(ErrorCode::kDomainMismatch, "'" + c.space().name(x) + "' is not binary");
  }
  check_inputs(c, p, e);
  if (!c.deterministic()) {
    throw Error(ErrorCode::kDeterminismUnverified, "circuit determinism is neither trusted nor verified");
  }
  SmoothTrace trace;
  const Circuit fanin2 = normalize_fanin2(require_decomposable(c), &trace.original_to_fanin2);
  trace.smoothed = smooth(fanin2, &trace.fanin2_to_smoothed);
  const Context ctx(trace.smoothed, p, e);
  Pass pass(ctx, x, {1, 0}, OrRule::kSmoothOnly, true, nullptr);
  auto [rows, scale] = pass.run();
  for (const auto& t : pass.tables()) {
    trace.tables.push_back(GateTable{to_rationals(t.row(0), t.scale), to_rationals(t.row(1), t.scale)});
  }
  trace.output_gamma = to_rationals(rows[0], scale);
  trace.output_delta = to_rationals(rows[1], scale);
  trace.score = binary_score(ctx, p, x, OrRule::kSmoothOnly, nullptr);
  return trace;
}

std::vector<Rational> compute_H_all(const Circuit& c, const ProductDistribution& p, const Entity& e) {
  const Circuit prepared = prepare(c, p, e);
  const Context ctx(prepared, p, e);
  Pass pass(ctx, std::nullopt, {}, OrRule::kConvolve, false, nullptr);
  auto [rows, scale] = pass.run();
  return to_rationals(rows[0], scale);
}

Rational compute_H(const Circuit& c, const ProductDistribution& p, const Entity& e, std::size_t k) {
  if (k > c.space().size()) {
    throw Error(ErrorCode::kIndexOutOfRange, "k = " + std::to_string(k) + " exceeds |X|");
  }
  return compute_H_all(c, p, e)[k];
}

Rational shap_score_nonbinary(const Circuit& c, const ProductDistribution& p, const Entity& e, FeatureId x,
                              EngineStats* stats) {
  c.space().check_feature(x);
  const Circuit prepared = prepare(c, p, e);
  const Context ctx(prepared, p, e);
  return multivalued_score(ctx, p, x, OrRule::kConvolve, stats);
}

std::vector<FeatureId> rank_features(const std::vector<Rational>& scores) {
  std::vector<FeatureId> order(scores.size());
  for (FeatureId f = 0; f < order.size(); ++f) order[f] = f;
  std::stable_sort(order.begin(), order.end(), [&](FeatureId a, FeatureId b) { return scores[a] > scores[b]; });
  return order;
}

ShapReport shap_all(const Circuit& c, const ProductDistribution& p, const Entity& e, const ShapOptions& options) {
  const Prepared prepared = prepare_for(options.algorithm, c, p, e);
  const Context ctx(prepared.circuit, p, e);
  const std::size_t n = c.space().size();

  ShapReport report;
  report.scores.assign(n, Rational(0));

  unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::exception_ptr failure;
  EngineStats total;
  auto worker = [&] {
    EngineStats local;
    try {
      for (std::size_t f; (f = next.fetch_add(1)) < n;) {
        report.scores[f] = score_feature(ctx, p, static_cast<FeatureId>(f), prepared.rule, &local);
      }
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!failure) failure = std::current_exception();
    }
    std::lock_guard lock(mutex);
    total += local;
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Pass expectation(ctx, std::nullopt, {}, prepared.rule, false, &total);
  auto [rows, scale] = expectation.run();
  report.expected_value = Rational(rows[0][0], scale);
  report.expected_value.canonicalize();
  report.classifier_output = c.evaluate(e);
  Rational sum = 0;
  for (const auto& s : report.scores) sum += s;
  report.efficiency_residual = sum - (Rational(report.classifier_output ? 1 : 0) - report.expected_value);
  if (report.efficiency_residual != 0) {
    throw Error(ErrorCode::kEfficiencyViolated,
                "scores do not add up to C(e) - E[C]; residual " + to_fraction_string(report.efficiency_residual));
  }
  report.ranking = rank_features(report.scores);
  if (options.stats != nullptr) *options.stats += total;
  return report;
}

BigInt model_count_via_shap(const Circuit& c, const Entity& e) {
  if (!c.space().all_binary()) {
    throw Error(ErrorCode::kNonBinaryCircuit, "model counting through SHAP needs binary features");
  }
  const auto uniform = ProductDistribution::uniform(c.space_ptr());
  const ShapReport report = shap_all(c, uniform, e);
  Rational sum = 0;
  for (const auto& s : report.scores) sum += s;
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, c.space().size());
  Rational count = Rational(scale) * (Rational(report.classifier_output ? 1 : 0) - sum);
  count.canonicalize();
  if (count.get_den() != 1) {
    throw Error(ErrorCode::kNonIntegralResult, "model count " + to_fraction_string(count) + " is not an integer");
  }
  return count.get_num();
}

}  // namespace dshap
