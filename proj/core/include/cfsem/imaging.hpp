#pragma once

#include <iosfwd>
#include <vector>

#include "cfsem/inference.hpp"

namespace cfsem {

/// Probability weights over an enumerated world list; sums to exactly 1.
struct WorldDistribution {
  std::vector<Rational> weights;

  Rational total() const;
};

/// The possible worlds of a model: every complete valuation, enumerated in
/// display order - variables in declaration order, each range iterated in
/// reverse declared order (so Boolean worlds start from all-ones). World
/// labels are 1-based: w1, w2, ...
struct Worlds {
  const CausalGraph* graph = nullptr;
  std::vector<std::vector<int>> values;  // [world][variable]
  WorldDistribution priors;              // from the model's joint

  std::size_t size() const { return values.size(); }
};

Worlds enumerate_worlds(const ProbabilisticModel& m);

/// Maps every world to the non-empty set of closest antecedent-worlds.
/// Antecedent-worlds select themselves.
struct SelectionFunction {
  Formula antecedent;
  std::vector<std::vector<std::size_t>> selected;  // [world] -> world indices
};

enum class SelectionMode {
  /// Use only the minimal-cardinality truthmakers of the antecedent.
  Singletons,
  /// Use every truthmaker.
  AllTruthmakers,
};

/// Builds the causal-similarity selection for an antecedent: a world
/// satisfying it maps to itself; any other world maps, for each chosen
/// truthmaking intervention, to the worlds that take the intervention's
/// values, agree with it outside the intervened variables and their
/// descendants, and range freely over the descendants.
/// Throws SemanticError for unsatisfiable antecedents.
SelectionFunction generate_selection(const ProbabilisticModel& m, const Formula& antecedent,
                                     SelectionMode mode);

/// Reads a selection fixture: one line per world `w<i> -> w<j>,w<k>,...`,
/// `#` comments, blank lines ignored. Every world must get exactly one line.
SelectionFunction load_selection(std::istream& in, const Formula& antecedent,
                                 std::size_t world_count);

/// Checks the selection-function invariants against a world list: selected
/// worlds satisfy the antecedent, antecedent-worlds self-select, and every
/// image is non-empty. Throws UsageError on violation.
void check_selection(const SelectionFunction& f, const Worlds& worlds);

enum class MassTransfer {
  /// Each world's mass moves to its unique selected world (requires
  /// singleton selections everywhere).
  LewisUnique,
  /// Mass splits over the selected worlds proportionally to their prior
  /// weights; an all-zero selected set falls back to an equal split.
  Bayes,
  /// Mass splits uniformly over the selected worlds.
  Equal,
};

/// dist imaged on the selection's antecedent. Worlds falsifying the
/// antecedent end with weight zero; antecedent-worlds never lose mass.
WorldDistribution image(const WorldDistribution& dist, const SelectionFunction& f,
                        const Worlds& worlds, MassTransfer transfer);

/// Three-step imaging counterfactual: update the exogenous variables on the
/// evidence, image the updated joint on the antecedent, sum the consequent
/// worlds.
Rational imaging_cf_probability(const ProbabilisticModel& m, const CounterfactualQuery& q,
                                const Evidence& e, const SelectionFunction& f,
                                MassTransfer transfer);

struct PearlEquivalenceReport {
  Rational imaging_value;  // Bayes imaging under the equal-causal-history selection
  Rational do_value;       // post-intervention probability
  bool equal = false;
};

/// Compares Bayes imaging (worlds with equal causal histories count as
/// equally similar) against the do-operator for a conjunctive antecedent,
/// both after updating on the evidence. Reports exact equality.
PearlEquivalenceReport pearl_equivalence_check(const ProbabilisticModel& m,
                                               const Formula& antecedent,
                                               const Formula& consequent, const Evidence& e);

}  // namespace cfsem
