#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinkfit::cli {

/// Exit codes: 0 success, 1 runtime or verification failure, 2 usage error.
enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the command line `args` (args[0] is the program name). Paths given as
/// "-" read from `in` or write to `out`.
int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err);

}  // namespace kinkfit::cli
