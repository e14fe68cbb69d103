#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace refrec::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kOther = 1,
  kParse = 2,
  kSingular = 3,
  kDegenerateReduction = 4,
  kVerificationFailed = 5,
};

/// Runs one command line (args excludes the program name). Reports go to
/// `out` unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace refrec::cli
