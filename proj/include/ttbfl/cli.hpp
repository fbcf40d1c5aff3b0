#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ttbfl::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,  // also parse and scope errors
  kFuelExhausted = 3,
};

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ttbfl::cli
