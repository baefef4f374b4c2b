#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varest::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kSuccess = 0,
  kInputError = 2,
  kNumericalError = 3,
};

/// Runs the varest command line with args excluding the program name.
/// Normal output goes to `out`, diagnostics to `err`; files are written only
/// at the path given by --out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace varest::cli
