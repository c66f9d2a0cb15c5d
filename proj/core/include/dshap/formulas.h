#ifndef DSHAP_FORMULAS_H_
#define DSHAP_FORMULAS_H_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dshap/circuit.h"
#include "dshap/oracle.h"

namespace dshap {

struct Literal {
  FeatureId feature = 0;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
};

using Term = std::vector<Literal>;

enum class Polarity { kPositive, kNegative, kMixed };

// Syntactic class a formula claims to belong to; checked at construction.
struct FormulaClass {
  std::optional<Polarity> polarity;
  std::optional<std::size_t> max_width;

  static FormulaClass any() { return {}; }
  static FormulaClass positive(std::size_t k) { return {Polarity::kPositive, k}; }
  static FormulaClass negative(std::size_t k) { return {Polarity::kNegative, k}; }
};

class CnfFormula;

class DnfFormula {
 public:
  // Throws WrongFormulaClass when a term violates `tag`, InvalidArgument when a
  // term mentions a feature twice.
  DnfFormula(SpacePtr space, std::vector<Term> terms, FormulaClass tag = FormulaClass::any());

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }
  const FormulaClass& tag() const { return tag_; }
  Polarity polarity() const;
  std::size_t max_width() const;

  bool evaluate(std::span<const ValueId> values) const;
  bool evaluate(const Entity& e) const { return evaluate(e.values()); }

  Classifier classifier() const;
  // Or of Ands; determinism is not claimed.
  Circuit to_circuit() const;
  // De Morgan dual.
  CnfFormula negated() const;

 private:
  SpacePtr space_;
  std::vector<Term> terms_;
  FormulaClass tag_;
};

class CnfFormula {
 public:
  CnfFormula(SpacePtr space, std::vector<Term> clauses, FormulaClass tag = FormulaClass::any());

  const FeatureSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const std::vector<Term>& clauses() const { return clauses_; }
  const FormulaClass& tag() const { return tag_; }
  Polarity polarity() const;
  std::size_t max_width() const;

  bool evaluate(std::span<const ValueId> values) const;
  bool evaluate(const Entity& e) const { return evaluate(e.values()); }

  Classifier classifier() const;
  DnfFormula negated() const;

 private:
  SpacePtr space_;
  std::vector<Term> clauses_;
  FormulaClass tag_;
};

bool eval_dnf(const DnfFormula& f, const Entity& e);

// Extends the space of `m` with one binary feature `name` (appended last).
SpacePtr extend_space(const FeatureSpace& space, const std::string& name);
// M or x, over X = var(M) + {x}.
Classifier disjoin_fresh(const Classifier& m, const std::string& name);
// M and not x, over X = var(M) + {x}.
Classifier conjoin_negated_fresh(const Classifier& m, const std::string& name);

// SHAP(M or x, all-ones, x) through the ssat(not M, S) weighted sum; M is over
// X \ {x}, uniform distribution.
Rational shap_disjunction_form(const Classifier& m);
// SHAP(M and not x, e, x) with e(x) = 0 and every other feature 1, through the
// ssat(M, S) weighted sum.
Rational shap_conjunction_form(const Classifier& m);

// SHAP(M,e,x) - SHAP(M,e,y) as one sum over subsets of X \ {x, y}.
Rational shap_difference_form(const Classifier& m, const ProductDistribution& p, const Entity& e, FeatureId x,
                              FeatureId y);
Rational shap_difference_form(const Classifier& m, const Entity& e, FeatureId x, FeatureId y);

// Built from two 2-NEG-CNF formulas M, M' over the same features:
// gadget = (not M' and x) or (not M and y), a 3-POS-DNF over X' + {x, y}.
struct ComparisonGadget {
  DnfFormula gadget;
  Entity entity;  // x = y = 0, everything else 1
  FeatureId x;
  FeatureId y;
};

ComparisonGadget comparison_reduction(const CnfFormula& m, const CnfFormula& m_prime, const std::string& x_name = "x",
                                      const std::string& y_name = "y");

// Both sides of sum_{k=0}^{s} s!(s+t-k)!/((s+t)!(s-k)!) = (s+t+1)/(t+1).
std::pair<Rational, Rational> binomial_sum_identity(unsigned s, unsigned t);

}  // namespace dshap

#endif  // DSHAP_FORMULAS_H_
