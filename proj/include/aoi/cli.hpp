#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace aoi {

// Exit codes: 0 success, 1 usage error, 2 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

// Dispatches one command (eval | simulate | sweep | optimum | crossing |
// table2). `args` excludes the program name. Results go to `out`,
// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace aoi
