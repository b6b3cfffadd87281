#pragma once

#include <ostream>

namespace blochcert {

// Exit codes: 0 success, 1 a check ran and failed, 2 usage error, 3 numerical failure.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitNumerical = 3 };

// Runs one CLI command. The JSON report goes to `out` (or to --out), the human summary to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace blochcert
