#pragma once

#include <set>
#include <utility>
#include <vector>

#include "cfsem/inference.hpp"
#include "cfsem/truthmaker.hpp"

namespace cfsem {

/// How counterfactual dependence between variables is established.
enum class DependenceMode {
  /// Some intervention on V1 changes V2's marginal (exact inequality).
  Probabilistic,
  /// V2 is reachable from V1 in the model's graph.
  Structural,
};

/// Strategy for weighting the truthmaking submodels of an antecedent.
enum class WeightingStrategy {
  /// Weight inversely proportional to the distance from the original model;
  /// members at distance zero absorb all weight, split uniformly.
  InverseDistance,
  /// Straight average.
  Uniform,
  /// All weight on the minimum-distance members, split uniformly.
  NearestOnly,
};

/// Ordered counterfactual-dependence pairs (V1, V2): V2 depends on V1.
struct DependencyRelation {
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t variable_count = 0;

  /// Total number of possible dependencies: n(n-1).
  std::size_t universe_size() const { return variable_count * (variable_count - 1); }
  bool contains(std::size_t from, std::size_t to) const {
    return pairs.count({from, to}) != 0;
  }
};

DependencyRelation dependencies(const ProbabilisticModel& m,
                                DependenceMode mode = DependenceMode::Probabilistic);

/// Eva-Stern-Hartmann counterfactual similarity distance: the cardinality of
/// the symmetric difference of the two dependency relations, normalized by
/// n(n-1). Requires the same variable set.
Rational distance(const ProbabilisticModel& m, const ProbabilisticModel& s,
                  DependenceMode mode = DependenceMode::Probabilistic);

struct WeightedSubmodel {
  Intervention intervention;
  Rational distance;
  Rational weight;
};

struct WeightedSubmodels {
  std::vector<WeightedSubmodel> items;
  /// True when some member had distance zero and the limit rule assigned all
  /// weight to the zero-distance members.
  bool zero_distance_rule_applied = false;
};

/// Weights for each truthmaking intervention, per the chosen strategy.
/// Distances are measured between m and the submodel each member generates.
/// Throws SemanticError on an empty truthmaker set.
WeightedSubmodels weights(const ProbabilisticModel& m, const TruthmakerSet& tms,
                          WeightingStrategy strategy,
                          DependenceMode mode = DependenceMode::Probabilistic);

struct SubmodelContribution {
  Intervention intervention;
  Rational distance;
  Rational weight;
  Rational consequent_prob;  // p_s(B) after evidence and intervention
};

struct CfProbabilityResult {
  Rational value;
  std::vector<SubmodelContribution> breakdown;
  Rational lower_bound;  // min_s p_s(B)
  Rational upper_bound;  // max_s p_s(B)
  bool zero_distance_rule_applied = false;

  bool convexity_violated() const {
    return value < lower_bound || value > upper_bound;
  }
};

/// The weighted probability of a counterfactual: enumerate the truthmakers of
/// the antecedent, weight their submodels by similarity to the (pre-evidence)
/// model, and average the consequent's post-intervention probability in the
/// evidence-updated model. Throws SemanticError on unsatisfiable antecedents
/// and zero-probability evidence.
CfProbabilityResult cf_probability(const ProbabilisticModel& m, const CounterfactualQuery& q,
                                   const Evidence& e,
                                   WeightingStrategy strategy = WeightingStrategy::InverseDistance,
                                   DependenceMode mode = DependenceMode::Probabilistic);

/// Truth of the counterfactual at a deterministic model: the consequent holds
/// in every submodel that truthmakes the antecedent. An unsatisfiable
/// antecedent is an error, not vacuous truth.
bool briggs_truth(const DeterministicModel& m, const CounterfactualQuery& q);

}  // namespace cfsem
