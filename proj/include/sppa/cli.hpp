#pragma once

// Command-line front end, kept in the library so tests can drive it without
// spawning processes.
//
//   sppa solve --problem <builtin|file> [options]
//   sppa table [--budget S]
//
// Exit codes: 0 success, 1 run failed without an incumbent, 2 bad flags or
// unknown problem, 3 problem file syntax error, 4 infeasible first MILP.

#include <iosfwd>
#include <string>
#include <vector>

namespace sppa {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitInfeasible = 4;

int cmd_solve(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cmd_table(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Dispatches on the first argument (the subcommand).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sppa
