#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "cfsem/model.hpp"

namespace cfsem {

/// Parses the line-oriented model format:
///
///   # comment
///   var NAME : {v1,v2,...}
///   parents NAME : P1 P2 ...
///   cpt NAME | P1=v,P2=v : val:prob val:prob ...
///   cpt NAME : val:prob ...
///   eq NAME | P1=v,P2=v : val
///   actual NAME=v ...
///
/// Probabilities are decimal or fraction literals. Any `cpt` line makes the
/// model probabilistic; mixing `cpt` and `eq` lines is a parse error.
/// Syntax is checked here; semantic invariants are validate_model()'s job.
ModelSpec parse_model_text(std::string_view text);
ModelSpec load_model_file(const std::string& path);

/// Canonical rendering of a spec; parse(print(parse(t))) yields the same
/// ModelSpec as parse(t).
std::string print_model(const ModelSpec& spec);

ModelSpec to_spec(const ProbabilisticModel& m);
ModelSpec to_spec(const DeterministicModel& m);

}  // namespace cfsem
