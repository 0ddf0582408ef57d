#pragma once

#include <vector>

#include "cfsem/formula.hpp"
#include "cfsem/intervention.hpp"
#include "cfsem/model.hpp"

namespace cfsem {

/// Exact joint distribution over the full Cartesian product of variable
/// ranges, by full enumeration. Entries are indexed by the mixed-radix rank
/// of the assignment (declaration order, last variable fastest, range values
/// in declared order).
class JointDistribution {
 public:
  JointDistribution(const CausalGraph& graph, std::vector<Rational> probs);

  const Rational& at(std::size_t rank) const { return probs_.at(rank); }
  std::size_t size() const { return probs_.size(); }

  /// Decodes a rank into a total assignment (values by variable index).
  std::vector<int> world_at(std::size_t rank) const;
  /// Probability mass of the worlds satisfying a partial assignment.
  Rational mass(const Assignment& a) const;
  Rational total() const;

 private:
  const CausalGraph* graph_;
  std::vector<Rational> probs_;
};

/// Partial assignment learnt by observation; values must be in range.
struct Evidence {
  Assignment values;
};

Evidence evidence_from_conjunction(const Formula& f, const CausalGraph& graph);

/// Product of the Cpt rows selected by each assignment.
JointDistribution joint(const ProbabilisticModel& m);

/// Sum of joint entries whose assignment satisfies f classically.
Rational prob(const ProbabilisticModel& m, const Formula& f);

/// p(f | given) on the model's joint. Throws SemanticError when the
/// conditioning event has probability zero.
Rational conditional_prob(const ProbabilisticModel& m, const Formula& f, const Formula& given);

/// Bayesian update of the exogenous variables on evidence e: their joint
/// distribution is replaced by its conditional given e, computed from the
/// full joint; endogenous Cpts are unchanged. With two or more exogenous
/// variables the conditioned block is re-factorized as a chain of Cpts among
/// them (declaration order), preserving evidence-induced correlations.
/// E = {} returns the model unchanged. Zero-probability evidence throws.
ProbabilisticModel update_evidence(const ProbabilisticModel& m, const Evidence& e);

/// prob(apply_probabilistic(m, i), f) - the post-intervention probability.
Rational do_prob(const ProbabilisticModel& m, const Intervention& i, const Formula& f);

/// The three-step procedure for a conjunctive antecedent: update the
/// exogenous variables on e, intervene, evaluate the consequent.
Rational pearl_counterfactual(const ProbabilisticModel& m, const Formula& antecedent,
                              const Formula& consequent, const Evidence& e);

}  // namespace cfsem
