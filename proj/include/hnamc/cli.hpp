#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hnamc {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitNegative = 1, kExitError = 2, kExitUnknown = 3 };

/// Runs the hnamc command line. `args` excludes the program name. Results go to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hnamc
