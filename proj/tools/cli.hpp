#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ceei::cli {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kHolds = 0,
  kFails = 1,
  kInvalidInput = 2,
  kNonConvergence = 3,
  kTooLarge = 4,
  kInconclusive = 5,
};

/// Runs one command. `args` excludes the program name. The JSON report goes
/// to `out` as a single document; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ceei::cli
