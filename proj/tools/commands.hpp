#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinchain::cli {

enum ExitCode : int {
    kPass = 0,
    kAssertionFailure = 1,
    kUsageError = 2,
    kNumericalFailure = 3,
};

// Runs the command line args (without the program name), writing reports to out and
// diagnostics to err. Returns one of ExitCode.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinchain::cli
