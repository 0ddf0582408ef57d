#pragma once

#include <optional>
#include <string>

#include "cfsem/formula.hpp"
#include "cfsem/model.hpp"

namespace cfsem {

/// An admissible intervention do(V1=v1, ..., Vn=vn): a consistent partial
/// assignment, possibly empty. Identifies the submodel it generates.
class Intervention {
 public:
  Intervention() = default;
  explicit Intervention(Assignment values) : values_(std::move(values)) {}

  const Assignment& values() const { return values_; }
  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

  auto operator<=>(const Intervention&) const = default;

 private:
  Assignment values_;
};

/// Union of two interventions when consistent; nullopt when some variable is
/// assigned two distinct values.
std::optional<Intervention> try_fuse(const Intervention& a, const Intervention& b);

/// As try_fuse, but inconsistency is a SemanticError (inadmissible fusion).
Intervention fuse(const Intervention& a, const Intervention& b);

/// Builds do(...) from a conjunction of atoms. Throws UsageError when the
/// formula is not a conjunction of atoms, SemanticError (unsatisfiable
/// antecedent) when two atoms force different values on one variable, and
/// BindingError for unknown variables / out-of-range values.
Intervention intervention_from_conjunction(const Formula& f, const CausalGraph& graph);

/// Range-checks every forced value. Out-of-range interventions are hard
/// errors (BindingError), not no-ops.
void check_intervention(const Intervention& i, const CausalGraph& graph);

/// Renders "do(X=0, Y=0)" with variables in declaration order; "do()" when
/// empty.
std::string print_intervention(const Intervention& i, const CausalGraph& graph);

/// Removes the intervened variables' equations, forces their values and
/// recomputes the remaining actual values in topological order from the
/// unchanged exogenous values. The input model is never mutated.
DeterministicModel apply_deterministic(const DeterministicModel& m, const Intervention& i);

/// Intervened variables become parentless with a point-mass Cpt at the forced
/// value; every other Cpt is unchanged.
ProbabilisticModel apply_probabilistic(const ProbabilisticModel& m, const Intervention& i);

}  // namespace cfsem
