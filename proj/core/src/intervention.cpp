#include "cfsem/intervention.hpp"

#include <sstream>

#include "cfsem/errors.hpp"

namespace cfsem {

std::optional<Intervention> try_fuse(const Intervention& a, const Intervention& b) {
  if (!a.values().consistent_with(b.values())) return std::nullopt;
  Assignment merged = a.values();
  for (const auto& [var, value] : b.values().bindings())
    if (!merged.contains(var)) merged.bind(var, value);
  return Intervention(std::move(merged));
}

Intervention fuse(const Intervention& a, const Intervention& b) {
  auto fused = try_fuse(a, b);
  if (!fused)
    throw SemanticError(SemanticError::Kind::InconsistentFusion,
                        "fusion assigns two distinct values to one variable");
  return *std::move(fused);
}

Intervention intervention_from_conjunction(const Formula& f, const CausalGraph& graph) {
  auto atoms = as_atom_conjunction(f);
  if (!atoms)
    throw UsageError("expected a conjunction of atoms, got '" + print_formula(f) + "'");
  Assignment values;
  for (const auto& [name, value] : *atoms) {
    std::size_t idx = graph.require(name);
    if (!graph.var(idx).value_index(value))
      throw BindingError("value " + std::to_string(value) + " outside the range of '" + name +
                         "'");
    if (auto bound = values.get(idx); bound && *bound != value)
      throw SemanticError(SemanticError::Kind::UnsatisfiableAntecedent,
                          "conjunction assigns two values to '" + name + "'");
    if (!values.contains(idx)) values.bind(idx, value);
  }
  return Intervention(std::move(values));
}

void check_intervention(const Intervention& i, const CausalGraph& graph) {
  for (const auto& [var, value] : i.values().bindings()) {
    if (var >= graph.size()) throw BindingError("intervention on unknown variable index");
    if (!graph.var(var).value_index(value))
      throw BindingError("intervention value " + std::to_string(value) +
                         " outside the range of '" + graph.var(var).name + "'");
  }
}

std::string print_intervention(const Intervention& i, const CausalGraph& graph) {
  std::ostringstream out;
  out << "do(";
  bool first = true;
  for (const auto& [var, value] : i.values().bindings()) {
    if (!first) out << ", ";
    first = false;
    out << graph.var(var).name << "=" << value;
  }
  out << ")";
  return out.str();
}

DeterministicModel apply_deterministic(const DeterministicModel& m, const Intervention& i) {
  check_intervention(i, m.graph);
  DeterministicModel out = m;
  for (const auto& [var, value] : i.values().bindings()) {
    out.equations[var].reset();
    out.actual[var] = value;
  }
  out.actual = forward_evaluate(out.graph, out.equations, out.actual);
  return out;
}

ProbabilisticModel apply_probabilistic(const ProbabilisticModel& m, const Intervention& i) {
  check_intervention(i, m.graph);
  ProbabilisticModel out = m;
  for (const auto& [var, value] : i.values().bindings()) {
    out.graph.set_parents(var, {});
    std::vector<Rational> row(out.graph.var(var).range.size(), 0);
    row[*out.graph.var(var).value_index(value)] = 1;
    out.cpts[var].rows.assign(1, std::move(row));
  }
  return out;
}

}  // namespace cfsem
