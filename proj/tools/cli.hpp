#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "netdef/model.hpp"

namespace netdef::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,     // bad flags, unreadable/invalid files, bad params
  kModelMismatch = 2,  // algorithm does not apply to the instance
  kSizeLimit = 3,      // brute force refused the instance
  kSolverFailure = 4,  // numerical trouble inside a solver
};

struct Environment {
  double tolerance = kModelTolerance;
  std::string error;  // non-empty when the environment could not be read
};

// Reads NETDEF_TOLERANCE when set. A value that is not a nonnegative number
// is reported through Environment::error and makes run() exit with
// kInputError.
Environment environment_from_process();

// args excludes the program name. Results go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err, const Environment& env = {});

}  // namespace netdef::cli
