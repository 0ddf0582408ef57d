#include "cfsem/counterfactual.hpp"

#include <algorithm>

#include "cfsem/errors.hpp"

namespace cfsem {

namespace {

// All single-variable marginals from one pass over the joint.
std::vector<std::vector<Rational>> marginals(const ProbabilisticModel& m) {
  JointDistribution j = joint(m);
  std::vector<std::vector<Rational>> out(m.graph.size());
  for (std::size_t v = 0; v < m.graph.size(); ++v)
    out[v].assign(m.graph.var(v).range.size(), 0);
  for (std::size_t rank = 0; rank < j.size(); ++rank) {
    if (j.at(rank) == 0) continue;
    std::vector<int> world = j.world_at(rank);
    for (std::size_t v = 0; v < m.graph.size(); ++v)
      out[v][*m.graph.var(v).value_index(world[v])] += j.at(rank);
  }
  return out;
}

Rational distance_from(const DependencyRelation& base, const ProbabilisticModel& s,
                       DependenceMode mode) {
  if (base.universe_size() == 0) return Rational(0);  // single variable, no pairs
  DependencyRelation b = dependencies(s, mode);
  std::size_t diff = 0;
  for (const auto& p : base.pairs) diff += b.pairs.count(p) ? 0 : 1;
  for (const auto& p : b.pairs) diff += base.pairs.count(p) ? 0 : 1;
  return Rational(diff, base.universe_size());
}

}  // namespace

DependencyRelation dependencies(const ProbabilisticModel& m, DependenceMode mode) {
  DependencyRelation rel;
  rel.variable_count = m.graph.size();
  if (mode == DependenceMode::Structural) {
    for (std::size_t from = 0; from < m.graph.size(); ++from)
      for (std::size_t to : m.graph.descendants(from)) rel.pairs.emplace(from, to);
    return rel;
  }
  // Probabilistic: some intervention on `from` shifts the marginal of `to`.
  std::vector<std::vector<Rational>> base = marginals(m);
  for (std::size_t from = 0; from < m.graph.size(); ++from) {
    for (int value : m.graph.var(from).range) {
      Assignment a;
      a.bind(from, value);
      std::vector<std::vector<Rational>> shifted =
          marginals(apply_probabilistic(m, Intervention(std::move(a))));
      for (std::size_t to = 0; to < m.graph.size(); ++to) {
        if (to == from || rel.contains(from, to)) continue;
        if (shifted[to] != base[to]) rel.pairs.emplace(from, to);
      }
    }
  }
  return rel;
}

Rational distance(const ProbabilisticModel& m, const ProbabilisticModel& s,
                  DependenceMode mode) {
  if (m.graph.variables() != s.graph.variables())
    throw UsageError("distance requires models over the same variables");
  return distance_from(dependencies(m, mode), s, mode);
}

WeightedSubmodels weights(const ProbabilisticModel& m, const TruthmakerSet& tms,
                          WeightingStrategy strategy, DependenceMode mode) {
  if (tms.empty())
    throw SemanticError(SemanticError::Kind::UnsatisfiableAntecedent,
                        "antecedent has no truthmakers; the probability is undefined");

  WeightedSubmodels out;
  out.items.reserve(tms.size());
  DependencyRelation base = dependencies(m, mode);
  for (const auto& i : tms.members) {
    Rational d = distance_from(base, apply_probabilistic(m, i), mode);
    out.items.push_back({i, std::move(d), Rational(0)});
  }

  std::size_t n = out.items.size();
  switch (strategy) {
    case WeightingStrategy::Uniform:
      for (auto& item : out.items) item.weight = Rational(1, n);
      break;
    case WeightingStrategy::NearestOnly: {
      Rational min = out.items.front().distance;
      for (const auto& item : out.items) min = std::min(min, item.distance);
      std::size_t count = std::count_if(out.items.begin(), out.items.end(),
                                        [&](const auto& it) { return it.distance == min; });
      for (auto& item : out.items)
        item.weight = item.distance == min ? Rational(1, count) : Rational(0);
      break;
    }
    case WeightingStrategy::InverseDistance: {
      std::size_t zeros = std::count_if(out.items.begin(), out.items.end(),
                                        [](const auto& it) { return it.distance == 0; });
      if (zeros > 0) {
        // limit of the inverse-distance weights as d -> 0+
        out.zero_distance_rule_applied = true;
        for (auto& item : out.items)
          item.weight = item.distance == 0 ? Rational(1, zeros) : Rational(0);
      } else {
        Rational denom = 0;
        for (const auto& item : out.items) denom += 1 / item.distance;
        for (auto& item : out.items) item.weight = (1 / item.distance) / denom;
      }
      break;
    }
  }
  return out;
}

CfProbabilityResult cf_probability(const ProbabilisticModel& m, const CounterfactualQuery& q,
                                   const Evidence& e, WeightingStrategy strategy,
                                   DependenceMode mode) {
  bind_check(q.antecedent, m.graph);
  bind_check(q.consequent, m.graph);
  TruthmakerSet tms = truthmakers(q.antecedent, m.graph);
  // weighting is measured on the pre-evidence model; consequent probabilities
  // on the evidence-updated one
  WeightedSubmodels ws = weights(m, tms, strategy, mode);
  ProbabilisticModel updated = update_evidence(m, e);

  CfProbabilityResult result;
  result.zero_distance_rule_applied = ws.zero_distance_rule_applied;
  result.value = 0;
  bool first = true;
  for (const auto& item : ws.items) {
    Rational p = do_prob(updated, item.intervention, q.consequent);
    if (first || p < result.lower_bound) result.lower_bound = p;
    if (first || p > result.upper_bound) result.upper_bound = p;
    first = false;
    result.value += item.weight * p;
    result.breakdown.push_back({item.intervention, item.distance, item.weight, std::move(p)});
  }
  return result;
}

bool briggs_truth(const DeterministicModel& m, const CounterfactualQuery& q) {
  bind_check(q.antecedent, m.graph);
  bind_check(q.consequent, m.graph);
  TruthmakerSet tms = truthmakers(q.antecedent, m.graph);
  if (tms.empty())
    throw SemanticError(SemanticError::Kind::UnsatisfiableAntecedent,
                        "antecedent has no truthmakers; truth value undefined");
  return std::all_of(tms.members.begin(), tms.members.end(), [&](const Intervention& i) {
    return eval_static(apply_deterministic(m, i), q.consequent);
  });
}

}  // namespace cfsem
