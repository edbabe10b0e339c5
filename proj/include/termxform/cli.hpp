#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace termxform {

enum ExitStatus : int {
  kExitOk = 0,
  kExitNoSolution = 1,
  kExitInputError = 2,
  kExitInternal = 3,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Static warnings for a rule file: calls to predicates that are neither
/// defined, declared nor builtin, and template/2 clauses whose first
/// argument can never be a node term. Throws ParseError on bad syntax.
std::vector<std::string> lint_rules(std::string_view user_rules);

}  // namespace termxform
