#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace privbot::cli {

enum ExitCode : int { kOk = 0, kBadArgs = 2, kBadData = 3, kInternal = 4 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace privbot::cli
