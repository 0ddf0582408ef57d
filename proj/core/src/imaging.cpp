#include "cfsem/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <sstream>

#include "cfsem/errors.hpp"
#include "cfsem/truthmaker.hpp"

namespace cfsem {

Rational WorldDistribution::total() const {
  Rational sum = 0;
  for (const auto& w : weights) sum += w;
  return sum;
}

Worlds enumerate_worlds(const ProbabilisticModel& m) {
  Worlds out;
  out.graph = &m.graph;
  std::size_t count = m.graph.assignment_count();
  out.values.reserve(count);
  out.priors.weights.reserve(count);
  for (std::size_t rank = 0; rank < count; ++rank) {
    // Display order: declaration order, each range iterated in reverse, so
    // the first world takes every variable's last declared value.
    std::vector<int> world(m.graph.size());
    std::size_t rest = rank;
    for (std::size_t v = m.graph.size(); v-- > 0;) {
      const auto& range = m.graph.var(v).range;
      world[v] = range[range.size() - 1 - rest % range.size()];
      rest /= range.size();
    }
    Rational p = 1;
    for (std::size_t v = 0; v < m.graph.size() && p != 0; ++v) {
      const auto& row = m.cpts[v].rows[parent_rank(m.graph, v, world)];
      p *= row[*m.graph.var(v).value_index(world[v])];
    }
    out.values.push_back(std::move(world));
    out.priors.weights.push_back(std::move(p));
  }
  return out;
}

SelectionFunction generate_selection(const ProbabilisticModel& m, const Formula& antecedent,
                                     SelectionMode mode) {
  bind_check(antecedent, m.graph);
  TruthmakerSet tms = truthmakers(antecedent, m.graph);
  if (tms.empty())
    throw SemanticError(SemanticError::Kind::UnsatisfiableAntecedent,
                        "antecedent has no truthmakers; nothing to select");

  struct Chosen {
    const Intervention* intervention;
    std::set<std::size_t> intervened;
    std::set<std::size_t> free;  // descendants that may vary
  };
  std::vector<Chosen> chosen;
  std::size_t min = tms.members.front().size();
  for (const auto& i : tms.members) min = std::min(min, i.size());
  for (const auto& i : tms.members) {
    if (mode == SelectionMode::Singletons && i.size() != min) continue;
    Chosen c{&i, {}, {}};
    for (const auto& [var, value] : i.values().bindings()) c.intervened.insert(var);
    c.free = m.graph.descendants_of(c.intervened);
    for (std::size_t v : c.intervened) c.free.erase(v);
    chosen.push_back(std::move(c));
  }

  Worlds worlds = enumerate_worlds(m);
  SelectionFunction out{antecedent, {}};
  out.selected.resize(worlds.size());
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    if (eval_formula(antecedent, m.graph, worlds.values[w])) {
      out.selected[w] = {w};
      continue;
    }
    std::set<std::size_t> image;
    for (const Chosen& c : chosen) {
      for (std::size_t t = 0; t < worlds.size(); ++t) {
        const auto& candidate = worlds.values[t];
        bool match = c.intervention->values().satisfied_by(candidate);
        for (std::size_t v = 0; match && v < m.graph.size(); ++v) {
          if (c.intervened.count(v) || c.free.count(v)) continue;
          match = candidate[v] == worlds.values[w][v];
        }
        if (match) image.insert(t);
      }
    }
    out.selected[w].assign(image.begin(), image.end());
  }
  return out;
}

SelectionFunction load_selection(std::istream& in, const Formula& antecedent,
                                 std::size_t world_count) {
  SelectionFunction out{antecedent, {}};
  out.selected.assign(world_count, {});
  std::vector<bool> seen(world_count, false);

  auto parse_label = [&](std::string token, std::size_t line) -> std::size_t {
    if (token.size() < 2 || token[0] != 'w')
      throw ParseError("expected world label 'w<i>', got '" + token + "'", line, true);
    std::size_t idx = 0;
    for (std::size_t k = 1; k < token.size(); ++k) {
      if (!std::isdigit(static_cast<unsigned char>(token[k])))
        throw ParseError("malformed world label '" + token + "'", line, true);
      idx = idx * 10 + static_cast<std::size_t>(token[k] - '0');
    }
    if (idx < 1 || idx > world_count)
      throw ParseError("world label '" + token + "' out of range", line, true);
    return idx - 1;
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string source, arrow, targets;
    if (!(ls >> source)) continue;  // blank
    if (!(ls >> arrow) || arrow != "->")
      throw ParseError("expected '<world> -> <worlds>'", lineno, true);
    std::string rest;
    std::getline(ls, rest);
    for (char c : rest)
      if (!std::isspace(static_cast<unsigned char>(c))) targets += c;
    if (targets.empty()) throw ParseError("missing target worlds", lineno, true);

    std::size_t src = parse_label(source, lineno);
    if (seen[src]) throw ParseError("duplicate line for world " + source, lineno, true);
    seen[src] = true;
    std::set<std::size_t> image;
    std::size_t start = 0;
    while (start <= targets.size()) {
      std::size_t comma = targets.find(',', start);
      std::string token = targets.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (token.empty()) throw ParseError("empty world label in target list", lineno, true);
      image.insert(parse_label(token, lineno));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    out.selected[src].assign(image.begin(), image.end());
  }
  for (std::size_t w = 0; w < world_count; ++w)
    if (!seen[w])
      throw ParseError("no selection line for world w" + std::to_string(w + 1), 0, true);
  return out;
}

void check_selection(const SelectionFunction& f, const Worlds& worlds) {
  if (f.selected.size() != worlds.size())
    throw UsageError("selection function covers a different number of worlds");
  for (std::size_t w = 0; w < worlds.size(); ++w) {
    const auto& image = f.selected[w];
    if (image.empty())
      throw UsageError("selection for world w" + std::to_string(w + 1) + " is empty");
    bool self = eval_formula(f.antecedent, *worlds.graph, worlds.values[w]);
    if (self && (image.size() != 1 || image.front() != w))
      throw UsageError("world w" + std::to_string(w + 1) +
                       " satisfies the antecedent and must select itself");
    for (std::size_t target : image) {
      if (target >= worlds.size())
        throw UsageError("selection target out of range for world w" + std::to_string(w + 1));
      if (!eval_formula(f.antecedent, *worlds.graph, worlds.values[target]))
        throw UsageError("selected world w" + std::to_string(target + 1) +
                         " does not satisfy the antecedent");
    }
  }
}

WorldDistribution image(const WorldDistribution& dist, const SelectionFunction& f,
                        const Worlds& worlds, MassTransfer transfer) {
  if (dist.weights.size() != f.selected.size() || dist.weights.size() != worlds.size())
    throw UsageError("distribution and selection cover different world counts");
  WorldDistribution out;
  out.weights.assign(dist.weights.size(), 0);
  for (std::size_t w = 0; w < dist.weights.size(); ++w) {
    const auto& targets = f.selected[w];
    const Rational& mass = dist.weights[w];
    switch (transfer) {
      case MassTransfer::LewisUnique: {
        if (targets.size() != 1)
          throw UsageError("lewis transfer requires a unique closest world; world w" +
                           std::to_string(w + 1) + " selects " +
                           std::to_string(targets.size()));
        out.weights[targets.front()] += mass;
        break;
      }
      case MassTransfer::Bayes: {
        Rational total = 0;
        for (std::size_t t : targets) total += dist.weights[t];
        if (total == 0) {
          for (std::size_t t : targets)
            out.weights[t] += mass / static_cast<int>(targets.size());
        } else {
          for (std::size_t t : targets) out.weights[t] += mass * dist.weights[t] / total;
        }
        break;
      }
      case MassTransfer::Equal: {
        for (std::size_t t : targets)
          out.weights[t] += mass / static_cast<int>(targets.size());
        break;
      }
    }
  }
  return out;
}

Rational imaging_cf_probability(const ProbabilisticModel& m, const CounterfactualQuery& q,
                                const Evidence& e, const SelectionFunction& f,
                                MassTransfer transfer) {
  bind_check(q.consequent, m.graph);
  ProbabilisticModel updated = update_evidence(m, e);
  Worlds worlds = enumerate_worlds(updated);
  check_selection(f, worlds);
  WorldDistribution imaged = image(worlds.priors, f, worlds, transfer);
  Rational value = 0;
  for (std::size_t w = 0; w < worlds.size(); ++w)
    if (imaged.weights[w] != 0 && eval_formula(q.consequent, updated.graph, worlds.values[w]))
      value += imaged.weights[w];
  return value;
}

PearlEquivalenceReport pearl_equivalence_check(const ProbabilisticModel& m,
                                               const Formula& antecedent,
                                               const Formula& consequent, const Evidence& e) {
  Intervention i = intervention_from_conjunction(antecedent, m.graph);
  ProbabilisticModel updated = update_evidence(m, e);
  // A conjunction has exactly one truthmaker, so the generated selection is
  // the equal-causal-history one: hold the non-descendants of the intervened
  // set, force the intervention, let descendants vary.
  SelectionFunction sel = generate_selection(updated, antecedent, SelectionMode::AllTruthmakers);
  Worlds worlds = enumerate_worlds(updated);
  WorldDistribution imaged = image(worlds.priors, sel, worlds, MassTransfer::Bayes);
  Rational imaging_value = 0;
  for (std::size_t w = 0; w < worlds.size(); ++w)
    if (imaged.weights[w] != 0 && eval_formula(consequent, updated.graph, worlds.values[w]))
      imaging_value += imaged.weights[w];
  Rational do_value = do_prob(updated, i, consequent);
  bool equal = imaging_value == do_value;
  return {std::move(imaging_value), std::move(do_value), equal};
}

}  // namespace cfsem
