#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfsem::cli {

/// Dispatches one invocation. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 usage error (bad flags, malformed input,
/// invalid model), 2 semantic error (unsatisfiable antecedent,
/// zero-probability evidence).
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace cfsem::cli
