#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace threshold_lab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInfeasible = 1;
inline constexpr int kExitUsage = 2;

/// Parses `args` (args[0] is the program name), runs one subcommand and
/// returns the process exit status. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace threshold_lab::cli
