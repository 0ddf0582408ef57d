#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cfsem/model.hpp"

namespace cfsem {

/// Boolean formula over atoms VAR=value: Atom, Not, And, Or. Connectives are
/// binary; the parser left-associates chains. Immutable, cheaply copyable.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or };

  static Formula atom(std::string var, int value);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);

  Kind kind() const;
  // Atom accessors
  const std::string& var() const;
  int value() const;
  // Not accessor
  Formula child() const;
  // And/Or accessors
  Formula left() const;
  Formula right() const;

  bool operator==(const Formula& other) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// A single, non-nested counterfactual: antecedent => consequent. Neither
/// side may itself contain a counterfactual (the parser enforces this).
struct CounterfactualQuery {
  Formula antecedent;
  Formula consequent;
};

/// Grammar: atoms `IDENT=INT`; unary `!`; infix `&`, `|` (precedence
/// ! > & > |, left-associative); parentheses. Whitespace insignificant.
/// Unknown variables are detected at binding time, not here.
Formula parse_formula(std::string_view text);

/// Parses "<formula> => <formula>". A nested "=>" is rejected with a
/// dedicated message.
CounterfactualQuery parse_query(std::string_view text);

/// Canonical rendering; parse(print(parse(t))) == parse(t).
std::string print_formula(const Formula& f);
std::string print_query(const CounterfactualQuery& q);

/// Throws BindingError if the formula mentions an undeclared variable or an
/// atom value outside the variable's range.
void bind_check(const Formula& f, const CausalGraph& graph);

/// Classical truth of f in a total assignment (values by variable index).
bool eval_formula(const Formula& f, const CausalGraph& graph, const std::vector<int>& world);

/// Truth of a non-counterfactual formula at a deterministic model's actual
/// assignment.
bool eval_static(const DeterministicModel& model, const Formula& f);

/// The variables mentioned by the formula (deduplicated, by name).
std::vector<std::string> formula_variables(const Formula& f);

/// If f is a conjunction of atoms (a single atom counts), returns the atoms
/// in syntactic order; otherwise nullopt.
std::optional<std::vector<std::pair<std::string, int>>> as_atom_conjunction(const Formula& f);

}  // namespace cfsem
