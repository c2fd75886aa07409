#pragma once

#include "pairprod/sweep.hpp"

namespace pairprod::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kPartialFailure = 2,
  kTotalFailure = 3,
};

/// 0 when every point succeeded, 2 when some failed, 3 when all failed. Reports failures on stderr.
int sweep_exit_code(const SweepResult& sweep);

/// Entry point of the `pairprod` tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace pairprod::cli
