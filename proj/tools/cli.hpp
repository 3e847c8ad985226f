#pragma once

#include <iosfwd>

namespace bayesprice::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kOk = 0,
  kBadInput = 1,
  kBudgetExceeded = 2,
  kProofViolation = 3,
};

/// Runs one invocation. JSON results go to `out`; diagnostics and --verbose
/// summaries go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bayesprice::cli
