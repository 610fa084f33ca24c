#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symrank::cli {

/// Process exit codes.
enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kBudgetRefused = 3,
};

/// Environment variable that overrides the default enumeration budget.
inline constexpr const char* kBudgetEnv = "SYMRANK_BUDGET";

/// Runs the command line `args` (without the program name), writing all
/// results to `out` and diagnostics to `err`. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace symrank::cli
