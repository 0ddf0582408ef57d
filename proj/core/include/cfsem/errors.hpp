#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfsem {

/// Malformed input text (formula, query, model file, selection fixture).
/// `position` is a byte offset into the offending string, or the line number
/// for line-oriented files (see `is_line`).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t position, bool is_line = false)
      : std::runtime_error(std::move(message)), position_(position), is_line_(is_line) {}

  std::size_t position() const { return position_; }
  bool is_line() const { return is_line_; }

 private:
  std::size_t position_;
  bool is_line_;
};

/// A formula or assignment refers to an unknown variable or to a value
/// outside the variable's range.
class BindingError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Structural misuse of the engine: wrong model kind, non-conjunctive
/// antecedent where one is required, invalid selection function, etc.
class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Well-formed query whose answer is undefined: unsatisfiable antecedent or
/// zero-probability evidence. Mapped to its own process exit code by the CLI.
class SemanticError : public std::runtime_error {
 public:
  enum class Kind { UnsatisfiableAntecedent, ZeroProbabilityEvidence, InconsistentFusion };

  SemanticError(Kind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

}  // namespace cfsem
