#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace alphalab::cli {

enum ExitCode : int { kOk = 0, kUserError = 1, kUsageError = 2, kInternalError = 3 };

// Entry point shared by main() and the tests. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace alphalab::cli
