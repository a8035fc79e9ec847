#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace zkid {

enum ExitStatus : int {
  kExitOk = 0,
  kExitReject = 1,
  kExitUsage = 2,
  kExitRuntime = 3,
};

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zkid
