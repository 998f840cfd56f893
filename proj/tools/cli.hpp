#pragma once

#include <ostream>

namespace benjamin::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2 };

/// Command-line entry point. Subcommands: evolve, stabilize, control,
/// verify, sweep. Returns 0 on success, 1 when a run fails or one of its
/// checks does not hold, 2 on bad flags or configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace benjamin::cli
