#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace drw {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitFailure = 2 };

/// Runs the `drw` command line. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace drw
