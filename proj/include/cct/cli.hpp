#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cct::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kCheckFailure = 3,
};

/// Runs the `cct` command line. `args` excludes the program name. Normal
/// output goes to `out`; diagnostics are a single line on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cct::cli
