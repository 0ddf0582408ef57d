#include "cfsem/inference.hpp"

#include <algorithm>

#include "cfsem/errors.hpp"

namespace cfsem {

namespace {

// World rank: declaration order, last variable fastest, values by declared
// range position.
std::vector<int> decode_rank(const CausalGraph& graph, std::size_t rank) {
  std::vector<int> world(graph.size());
  for (std::size_t v = graph.size(); v-- > 0;) {
    const auto& range = graph.var(v).range;
    world[v] = range[rank % range.size()];
    rank /= range.size();
  }
  return world;
}

}  // namespace

JointDistribution::JointDistribution(const CausalGraph& graph, std::vector<Rational> probs)
    : graph_(&graph), probs_(std::move(probs)) {}

std::vector<int> JointDistribution::world_at(std::size_t rank) const {
  return decode_rank(*graph_, rank);
}

Rational JointDistribution::mass(const Assignment& a) const {
  Rational sum = 0;
  for (std::size_t rank = 0; rank < probs_.size(); ++rank)
    if (a.satisfied_by(world_at(rank))) sum += probs_[rank];
  return sum;
}

Rational JointDistribution::total() const {
  Rational sum = 0;
  for (const auto& p : probs_) sum += p;
  return sum;
}

Evidence evidence_from_conjunction(const Formula& f, const CausalGraph& graph) {
  Intervention i = intervention_from_conjunction(f, graph);
  return Evidence{i.values()};
}

JointDistribution joint(const ProbabilisticModel& m) {
  std::size_t count = m.graph.assignment_count();
  std::vector<Rational> probs(count);
  for (std::size_t rank = 0; rank < count; ++rank) {
    std::vector<int> world = decode_rank(m.graph, rank);
    Rational p = 1;
    for (std::size_t v = 0; v < m.graph.size() && p != 0; ++v) {
      const auto& row = m.cpts[v].rows[parent_rank(m.graph, v, world)];
      p *= row[*m.graph.var(v).value_index(world[v])];
    }
    probs[rank] = std::move(p);
  }
  return JointDistribution(m.graph, std::move(probs));
}

Rational prob(const ProbabilisticModel& m, const Formula& f) {
  bind_check(f, m.graph);
  JointDistribution j = joint(m);
  Rational sum = 0;
  for (std::size_t rank = 0; rank < j.size(); ++rank)
    if (eval_formula(f, m.graph, j.world_at(rank))) sum += j.at(rank);
  return sum;
}

Rational conditional_prob(const ProbabilisticModel& m, const Formula& f, const Formula& given) {
  bind_check(f, m.graph);
  bind_check(given, m.graph);
  JointDistribution j = joint(m);
  Rational num = 0, den = 0;
  for (std::size_t rank = 0; rank < j.size(); ++rank) {
    std::vector<int> world = j.world_at(rank);
    if (!eval_formula(given, m.graph, world)) continue;
    den += j.at(rank);
    if (eval_formula(f, m.graph, world)) num += j.at(rank);
  }
  if (den == 0)
    throw SemanticError(SemanticError::Kind::ZeroProbabilityEvidence,
                        "conditioning event has probability zero");
  return num / den;
}

ProbabilisticModel update_evidence(const ProbabilisticModel& m, const Evidence& e) {
  if (e.values.empty()) return m;
  for (const auto& [var, value] : e.values.bindings())
    if (!m.graph.var(var).value_index(value))
      throw BindingError("evidence value " + std::to_string(value) + " outside the range of '" +
                         m.graph.var(var).name + "'");

  std::vector<std::size_t> exo;
  for (std::size_t v = 0; v < m.graph.size(); ++v)
    if (m.graph.is_exogenous(v)) exo.push_back(v);

  // Conditional joint of the exogenous block given the evidence.
  JointDistribution j = joint(m);
  Rational p_e = 0;
  std::map<std::vector<int>, Rational> block;  // exogenous values -> mass
  for (std::size_t rank = 0; rank < j.size(); ++rank) {
    if (j.at(rank) == 0) continue;
    std::vector<int> world = j.world_at(rank);
    if (!e.values.satisfied_by(world)) continue;
    p_e += j.at(rank);
    std::vector<int> key(exo.size());
    for (std::size_t k = 0; k < exo.size(); ++k) key[k] = world[exo[k]];
    block[key] += j.at(rank);
  }
  if (p_e == 0)
    throw SemanticError(SemanticError::Kind::ZeroProbabilityEvidence,
                        "evidence has probability zero");
  for (auto& [key, mass] : block) mass /= p_e;

  // Re-factorize the block as a chain among the exogenous variables in
  // declaration order: p(U1), p(U2|U1), ... Endogenous Cpts stay untouched.
  ProbabilisticModel out = m;
  for (std::size_t k = 0; k < exo.size(); ++k) {
    std::size_t v = exo[k];
    std::vector<std::size_t> chain(exo.begin(), exo.begin() + k);
    out.graph.set_parents(v, chain);

    const auto& range = m.graph.var(v).range;
    std::size_t context_count = 1;
    for (std::size_t p : chain) context_count *= m.graph.var(p).range.size();
    std::vector<std::vector<Rational>> rows(context_count,
                                            std::vector<Rational>(range.size(), 0));
    std::vector<Rational> context_mass(context_count, 0);
    for (const auto& [key, mass] : block) {
      std::size_t context = 0;
      for (std::size_t p = 0; p < k; ++p) {
        const auto& pr = m.graph.var(exo[p]).range;
        context = context * pr.size() +
                  *m.graph.var(exo[p]).value_index(key[p]);
      }
      rows[context][*m.graph.var(v).value_index(key[k])] += mass;
      context_mass[context] += mass;
    }
    for (std::size_t c = 0; c < context_count; ++c) {
      if (context_mass[c] == 0) {
        // unreachable context; any proper distribution will do
        for (auto& cell : rows[c]) cell = Rational(1, range.size());
      } else {
        for (auto& cell : rows[c]) cell /= context_mass[c];
      }
    }
    out.cpts[v].rows = std::move(rows);
  }
  return out;
}

Rational do_prob(const ProbabilisticModel& m, const Intervention& i, const Formula& f) {
  return prob(apply_probabilistic(m, i), f);
}

Rational pearl_counterfactual(const ProbabilisticModel& m, const Formula& antecedent,
                              const Formula& consequent, const Evidence& e) {
  Intervention i = intervention_from_conjunction(antecedent, m.graph);
  bind_check(consequent, m.graph);
  return do_prob(update_evidence(m, e), i, consequent);
}

}  // namespace cfsem
