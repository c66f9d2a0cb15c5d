#include "dshap/formulas.h"

#include <algorithm>
#include <bit>

#include "dshap/error.h"

namespace dshap {
namespace {

void validate_terms(const FeatureSpace& space, const std::vector<Term>& terms, const FormulaClass& tag,
                    const char* kind) {
  for (const auto& term : terms) {
    std::vector<FeatureId> seen;
    for (const auto& lit : term) {
      space.check_feature(lit.feature);
      if (!space.is_binary(lit.feature)) {
        throw Error(ErrorCode::kDomainMismatch, "'" + space.name(lit.feature) + "' is not binary");
      }
      seen.push_back(lit.feature);
      if (tag.polarity == Polarity::kPositive && !lit.positive) {
        throw Error(ErrorCode::kWrongFormulaClass, std::string(kind) + " tagged positive has a negative literal");
      }
      if (tag.polarity == Polarity::kNegative && lit.positive) {
        throw Error(ErrorCode::kWrongFormulaClass, std::string(kind) + " tagged negative has a positive literal");
      }
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw Error(ErrorCode::kInvalidArgument, std::string(kind) + " mentions a feature twice in one term");
    }
    if (tag.max_width && term.size() > *tag.max_width) {
      throw Error(ErrorCode::kWrongFormulaClass,
                  std::string(kind) + " has a term wider than " + std::to_string(*tag.max_width));
    }
  }
}

Polarity polarity_of(const std::vector<Term>& terms) {
  bool pos = false, neg = false;
  for (const auto& term : terms) {
    for (const auto& lit : term) (lit.positive ? pos : neg) = true;
  }
  if (pos && neg) return Polarity::kMixed;
  return neg ? Polarity::kNegative : Polarity::kPositive;
}

std::size_t width_of(const std::vector<Term>& terms) {
  std::size_t w = 0;
  for (const auto& term : terms) w = std::max(w, term.size());
  return w;
}

bool literal_holds(const Literal& lit, std::span<const ValueId> values) {
  return (values[lit.feature] == 1) == lit.positive;
}

std::vector<Term> flip(const std::vector<Term>& terms) {
  std::vector<Term> out = terms;
  for (auto& term : out) {
    for (auto& lit : term) lit.positive = !lit.positive;
  }
  return out;
}

FormulaClass flip(const FormulaClass& tag) {
  FormulaClass out = tag;
  if (tag.polarity == Polarity::kPositive) out.polarity = Polarity::kNegative;
  if (tag.polarity == Polarity::kNegative) out.polarity = Polarity::kPositive;
  return out;
}

// sum_k w_k(n) 2^{k-n} sum_{|S|=k} ssat(target, S), n = |space(target)| + 1.
Rational ssat_weighted_sum(const Classifier& target) {
  const std::size_t n = target.space().size() + 1;
  if (n > kMaxSubsetFeatures) {
    throw Error(ErrorCode::kTooLarge, "ssat form over " + std::to_string(n) + " features");
  }
  const auto weights = shapley_weights(n);
  std::vector<BigInt> by_size(n, BigInt(0));
  const std::size_t m = n - 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    FeatureSet s(m);
    for (FeatureId f = 0; f < m; ++f) {
      if ((mask >> f) & 1U) s.insert(f);
    }
    by_size[static_cast<std::size_t>(std::popcount(mask))] += ssat(target, s);
  }
  Rational total = 0;
  for (std::size_t k = 0; k < n; ++k) {
    BigInt pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 2, n - k);
    total += weights[k] * fraction(by_size[k], pow);
  }
  return total;
}

}  // namespace

DnfFormula::DnfFormula(SpacePtr space, std::vector<Term> terms, FormulaClass tag)
    : space_(std::move(space)), terms_(std::move(terms)), tag_(tag) {
  validate_terms(*space_, terms_, tag_, "DNF");
}

Polarity DnfFormula::polarity() const { return polarity_of(terms_); }
std::size_t DnfFormula::max_width() const { return width_of(terms_); }

bool DnfFormula::evaluate(std::span<const ValueId> values) const {
  for (const auto& term : terms_) {
    if (std::all_of(term.begin(), term.end(), [&](const Literal& l) { return literal_holds(l, values); })) return true;
  }
  return false;
}

Classifier DnfFormula::classifier() const {
  auto self = std::make_shared<const DnfFormula>(*this);
  return Classifier(space_, [self](std::span<const ValueId> v) { return self->evaluate(v); });
}

Circuit DnfFormula::to_circuit() const {
  CircuitBuilder b(space_);
  std::vector<GateId> term_gates;
  for (const auto& term : terms_) {
    if (term.empty()) {
      term_gates.push_back(b.add_constant(true));
      continue;
    }
    std::vector<GateId> lits;
    for (const auto& lit : term) {
      const GateId v = b.add_variable(lit.feature);
      lits.push_back(lit.positive ? v : b.add_not(v));
    }
    term_gates.push_back(lits.size() == 1 ? lits[0] : b.add_and(std::move(lits)));
  }
  if (term_gates.empty()) return b.build(b.add_constant(false));
  if (term_gates.size() == 1) return b.build(term_gates[0]);
  return b.build(b.add_or(std::move(term_gates)));
}

CnfFormula DnfFormula::negated() const { return CnfFormula(space_, flip(terms_), flip(tag_)); }

CnfFormula::CnfFormula(SpacePtr space, std::vector<Term> clauses, FormulaClass tag)
    : space_(std::move(space)), clauses_(std::move(clauses)), tag_(tag) {
  validate_terms(*space_, clauses_, tag_, "CNF");
}

Polarity CnfFormula::polarity() const { return polarity_of(clauses_); }
std::size_t CnfFormula::max_width() const { return width_of(clauses_); }

bool CnfFormula::evaluate(std::span<const ValueId> values) const {
  for (const auto& clause : clauses_) {
    if (std::none_of(clause.begin(), clause.end(), [&](const Literal& l) { return literal_holds(l, values); })) {
      return false;
    }
  }
  return true;
}

Classifier CnfFormula::classifier() const {
  auto self = std::make_shared<const CnfFormula>(*this);
  return Classifier(space_, [self](std::span<const ValueId> v) { return self->evaluate(v); });
}

DnfFormula CnfFormula::negated() const { return DnfFormula(space_, flip(clauses_), flip(tag_)); }

bool eval_dnf(const DnfFormula& f, const Entity& e) { return f.evaluate(e); }

SpacePtr extend_space(const FeatureSpace& space, const std::string& name) {
  auto out = std::make_shared<FeatureSpace>(space);
  out->add_binary_feature(name);
  return out;
}

Classifier disjoin_fresh(const Classifier& m, const std::string& name) {
  const auto x = static_cast<FeatureId>(m.space().size());
  return Classifier(extend_space(m.space(), name),
                    [m, x](std::span<const ValueId> v) { return v[x] == 1 || m(v.first(x)); });
}

Classifier conjoin_negated_fresh(const Classifier& m, const std::string& name) {
  const auto x = static_cast<FeatureId>(m.space().size());
  return Classifier(extend_space(m.space(), name),
                    [m, x](std::span<const ValueId> v) { return v[x] == 0 && m(v.first(x)); });
}

Rational shap_disjunction_form(const Classifier& m) { return ssat_weighted_sum(m.negated()); }

Rational shap_conjunction_form(const Classifier& m) { return ssat_weighted_sum(m); }

Rational shap_difference_form(const Classifier& m, const ProductDistribution& p, const Entity& e, FeatureId x,
                              FeatureId y) {
  m.space().check_feature(x);
  m.space().check_feature(y);
  if (x == y) throw Error(ErrorCode::kInvalidArgument, "difference form needs two distinct features");
  const std::size_t n = m.space().size();
  if (n > kMaxSubsetFeatures) throw Error(ErrorCode::kTooLarge, "difference form over too many features");
  const PhiTable phi(m, p, e);
  const auto weights = shapley_weights(n - 1);  // |S|!(n-|S|-2)!/(n-1)!
  const std::uint64_t bx = std::uint64_t{1} << x;
  const std::uint64_t by = std::uint64_t{1} << y;
  Rational total = 0;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if ((s & bx) || (s & by)) continue;
    total += weights[static_cast<std::size_t>(std::popcount(s))] * (phi(s | bx) - phi(s | by));
  }
  return total;
}

Rational shap_difference_form(const Classifier& m, const Entity& e, FeatureId x, FeatureId y) {
  return shap_difference_form(m, ProductDistribution::uniform(m.space_ptr()), e, x, y);
}

ComparisonGadget comparison_reduction(const CnfFormula& m, const CnfFormula& m_prime, const std::string& x_name,
                                      const std::string& y_name) {
  for (const CnfFormula* f : {&m, &m_prime}) {
    for (const auto& clause : f->clauses()) {
      const bool negative = std::none_of(clause.begin(), clause.end(), [](const Literal& l) { return l.positive; });
      if (!negative || clause.size() > 2) throw Error(ErrorCode::kWrongFormulaClass, "expected a 2-NEG-CNF");
    }
  }
  if (!(m.space() == m_prime.space())) throw Error(ErrorCode::kDomainMismatch, "formulas over different features");
  auto with_x = extend_space(m.space(), x_name);
  auto space = extend_space(*with_x, y_name);
  const auto x = static_cast<FeatureId>(m.space().size());
  const auto y = static_cast<FeatureId>(x + 1);
  std::vector<Term> terms;
  const DnfFormula not_m_prime = m_prime.negated();
  const DnfFormula not_m = m.negated();
  for (auto term : not_m_prime.terms()) {
    term.push_back(Literal{x, true});
    terms.push_back(std::move(term));
  }
  for (auto term : not_m.terms()) {
    term.push_back(Literal{y, true});
    terms.push_back(std::move(term));
  }
  std::vector<ValueId> values(space->size(), 1);
  values[x] = 0;
  values[y] = 0;
  Entity entity(space, std::move(values));
  return ComparisonGadget{DnfFormula(space, std::move(terms), FormulaClass::positive(3)), std::move(entity), x, y};
}

std::pair<Rational, Rational> binomial_sum_identity(unsigned s, unsigned t) {
  auto fact = [](unsigned n) {
    BigInt r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
  };
  Rational left = 0;
  for (unsigned k = 0; k <= s; ++k) {
    left += fraction(fact(s) * fact(s + t - k), fact(s + t) * fact(s - k));
  }
  Rational right(s + t + 1, t + 1);
  right.canonicalize();
  return {left, right};
}

}  // namespace dshap
