#pragma once

#include <iosfwd>

namespace nlfb {

/// Exit codes of the command line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitInconclusive = 4,
};

/// Entry point of the `nlfb` tool; JSON results go to `out`, errors to `err`
/// as a single JSON object.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlfb
