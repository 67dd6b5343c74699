#pragma once

namespace swarmplan::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kMismatch = 2, kSolverFailure = 3 };

/// Entry point of the `swarmplan` command; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace swarmplan::cli
