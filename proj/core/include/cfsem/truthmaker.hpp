#pragma once

#include <vector>

#include "cfsem/formula.hpp"
#include "cfsem/intervention.hpp"

namespace cfsem {

/// The exact truthmakers of a formula, as the set of interventions whose
/// submodels truthmake it. Members are non-empty, deduplicated and kept in a
/// canonical order; the original model (do()) is never a member.
struct TruthmakerSet {
  Formula formula;
  std::vector<Intervention> members;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
};

/// Recursive enumeration over the truthmaking clauses:
///   V=v        -> { do(V=v) }
///   !A         -> falsemakers(A)
///   A & B      -> all consistent fusions of a truthmaker of A with one of B
///   A | B      -> truthmakers(A) + truthmakers(B) + truthmakers(A & B)
/// Inconsistent fusions are dropped silently; an empty result is returned as
/// an empty set (the antecedent is unsatisfiable), not an error.
TruthmakerSet truthmakers(const Formula& f, const CausalGraph& graph);

/// Dual clauses:
///   V=v        -> { do(V=v') : v' in range(V), v' != v }
///   !A         -> truthmakers(A)
///   A & B      -> falsemakers(A) + falsemakers(B) + falsemakers(A | B)
///   A | B      -> all consistent fusions of falsemakers of A and of B
TruthmakerSet falsemakers(const Formula& f, const CausalGraph& graph);

}  // namespace cfsem
