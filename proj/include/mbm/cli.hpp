#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mbm {

/// Process exit codes of the `mbm` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitInvalidInput = 1,
  kExitBudget = 2,
  kExitInnerFailure = 3,
};

/// Runs the command line `args` (without the program name) in-process.
/// Human-readable output goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbm
