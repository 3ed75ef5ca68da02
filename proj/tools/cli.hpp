#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dualrate::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kPartial = 2 };

/// Runs one CLI invocation; `args` excludes the program name. Data goes to
/// `out` unless --out names a file, progress and verdicts go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dualrate::cli
