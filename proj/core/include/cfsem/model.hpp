#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cfsem/rational.hpp"

namespace cfsem {

/// True for a valid variable token: letter followed by letters, digits or
/// underscores.
bool is_valid_variable_name(std::string_view name);

/// A finite discrete variable: a name and an ordered range of distinct
/// integer values. Boolean variables use the range {0, 1}.
struct Variable {
  std::string name;
  std::vector<int> range;

  std::optional<std::size_t> value_index(int value) const;
  bool operator==(const Variable&) const = default;
};

/// Directed acyclic graph over declared variables. Variables are addressed
/// by their declaration index; names resolve through index_of().
class CausalGraph {
 public:
  std::size_t add_variable(std::string name, std::vector<int> range);
  void set_parents(std::size_t child, std::vector<std::size_t> parents);

  std::size_t size() const { return variables_.size(); }
  const Variable& var(std::size_t i) const { return variables_.at(i); }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<std::size_t>& parents(std::size_t i) const { return parents_.at(i); }
  bool is_exogenous(std::size_t i) const { return parents_.at(i).empty(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Index lookup that throws BindingError for unknown names.
  std::size_t require(std::string_view name) const;

  /// Variables reachable from v by one or more directed edges.
  std::set<std::size_t> descendants(std::size_t v) const;
  std::set<std::size_t> descendants_of(const std::set<std::size_t>& vs) const;

  /// Topological order of all variables, or nullopt if the graph has a cycle.
  std::optional<std::vector<std::size_t>> topological_order() const;

  /// Number of full assignments (product of range sizes).
  std::size_t assignment_count() const;

  bool operator==(const CausalGraph&) const = default;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<std::size_t>> parents_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Name-based descendants lookup, mirroring the graph operation.
std::set<std::string> descendants(const CausalGraph& graph, std::string_view name);

/// Partial assignment of values to variables (by index). Used for actual
/// values, evidence, interventions and world restrictions.
class Assignment {
 public:
  Assignment() = default;

  /// Binds var to value; re-binding to a different value is rejected with
  /// std::logic_error (use consistent_with()/merge for fusion semantics).
  void bind(std::size_t var, int value);
  std::optional<int> get(std::size_t var) const;
  bool contains(std::size_t var) const { return bindings_.count(var) != 0; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::map<std::size_t, int>& bindings() const { return bindings_; }

  bool consistent_with(const Assignment& other) const;
  /// True if a total assignment (values indexed by variable) agrees with
  /// every binding.
  bool satisfied_by(const std::vector<int>& world) const;

  auto operator<=>(const Assignment&) const = default;

 private:
  std::map<std::size_t, int> bindings_;
};

/// Conditional probability table for one variable: one row per full parent
/// assignment, each row a distribution over the child's range (by value
/// index). Exogenous variables carry a single unconditional row.
struct Cpt {
  std::size_t child = 0;
  /// rows[parent_rank][child_value_index]; parent ranks enumerate the parent
  /// ranges in declaration order, last parent fastest.
  std::vector<std::vector<Rational>> rows;

  bool operator==(const Cpt&) const = default;
};

/// Structural equation for one variable: a total function from parent
/// assignments to a value in the child's range.
struct StructuralEquation {
  std::size_t child = 0;
  std::vector<int> outputs;  // by parent rank

  bool operator==(const StructuralEquation&) const = default;
};

/// Mixed-radix rank of the parent values of `child` within a total
/// assignment, matching Cpt/StructuralEquation row order.
std::size_t parent_rank(const CausalGraph& graph, std::size_t child,
                        const std::vector<int>& world);
std::size_t parent_assignment_count(const CausalGraph& graph, std::size_t child);

/// DAG + one Cpt per variable; the joint distribution is the product of the
/// selected rows (Markov factorization by construction).
struct ProbabilisticModel {
  CausalGraph graph;
  std::vector<Cpt> cpts;  // cpts[i] describes variable i

  bool operator==(const ProbabilisticModel&) const = default;
};

/// DAG + structural equations for every variable with parents + a total
/// actual assignment consistent with the equations.
struct DeterministicModel {
  CausalGraph graph;
  std::vector<std::optional<StructuralEquation>> equations;  // by variable
  std::vector<int> actual;                                   // by variable

  bool operator==(const DeterministicModel&) const = default;
};

/// Evaluates the equations in topological order from the exogenous values in
/// `actual`, returning the implied total assignment. Variables without an
/// equation keep their `actual` entry.
std::vector<int> forward_evaluate(const CausalGraph& graph,
                                  const std::vector<std::optional<StructuralEquation>>& equations,
                                  const std::vector<int>& actual);

// ---------------------------------------------------------------------------
// Unvalidated model description and validation
// ---------------------------------------------------------------------------

/// Raw, possibly invalid model description as produced by the file parser or
/// assembled programmatically. validate_model() reports violations against
/// the type invariants; to_probabilistic()/to_deterministic() require a clean
/// report.
struct ModelSpec {
  struct RawCptRow {
    std::string child;
    std::vector<std::pair<std::string, int>> condition;  // parent = value
    std::vector<std::pair<int, Rational>> entries;       // value : probability
  };
  struct RawEqRow {
    std::string child;
    std::vector<std::pair<std::string, int>> condition;
    int output = 0;
  };

  std::vector<Variable> variables;
  std::vector<std::pair<std::string, std::vector<std::string>>> parents;
  std::vector<RawCptRow> cpt_rows;
  std::vector<RawEqRow> eq_rows;
  std::vector<std::pair<std::string, int>> actuals;

  bool is_probabilistic() const { return !cpt_rows.empty(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks every type invariant: token validity and uniqueness of names,
/// range sizes, declared parents, acyclicity, Cpt row completeness and
/// normalization, equation totality and range, actual-value consistency.
/// Violations are data; this never throws on bad models.
ValidationReport validate_model(const ModelSpec& spec);

ProbabilisticModel to_probabilistic(const ModelSpec& spec);
DeterministicModel to_deterministic(const ModelSpec& spec);

}  // namespace cfsem
