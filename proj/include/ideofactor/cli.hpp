#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ideofactor {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // replay produced different bytes
  kExitInput = 2,
  kExitNumeric = 3,
  kExitOverlap = 4,
};

/// Runs the `ideofactor` command line with `args` (program name excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ideofactor
