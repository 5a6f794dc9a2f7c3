#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qi::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitNumericFailure = 1,
  kExitInvalidParams = 2,
  kExitIoFailure = 3,
  kExitGateFailure = 4,
};

// Runs the `qi` command line with `args` (program name excluded). Reports go
// to `out` unless --out redirects them; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qi::cli
