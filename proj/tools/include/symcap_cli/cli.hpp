#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace symcap::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_internal = 1,
  exit_malformed = 2,
  exit_hypothesis = 3,
  exit_budget = 4,
  exit_verification = 5,
};

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics and error messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace symcap::cli
