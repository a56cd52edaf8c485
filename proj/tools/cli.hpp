#pragma once

#include <ostream>

namespace vilenkin::cli {

enum ExitCode : int {
  kOk = 0,
  kContractViolation = 1,
  kUsage = 2,
  kInfeasible = 3,
};

/// Parses argv and runs one subcommand. Reports go to the output directory;
/// progress and the list of failing invariants go to `out`/`err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vilenkin::cli
