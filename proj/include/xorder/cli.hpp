#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace xorder {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitCapacity = 3,
  kExitDegenerate = 4,
};

/// Runs the command-line interface on `args` (args[0] is the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xorder
