#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace geminal::cli {

enum ExitCode : int {
  success = 0,
  violation = 1,       // a rule failed or a representability verdict was false
  invalid_input = 2,
  resource_failure = 3 // size limit or convergence failure
};

/// Parses arguments (without the program name) and runs one job.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace geminal::cli
