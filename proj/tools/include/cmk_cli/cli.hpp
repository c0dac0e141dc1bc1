#pragma once

namespace cmk::cli {

enum ExitCode : int { kOk = 0, kSolverFailure = 1, kConfigError = 2 };

/// Entry point of the `cmk` command line tool.
int cli_main(int argc, char** argv);

}  // namespace cmk::cli
