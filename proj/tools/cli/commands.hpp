#ifndef CVCONC_CLI_COMMANDS_HPP
#define CVCONC_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cvconc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Full command line without the program name, e.g. {"kerr", "--out", "runs/a"}.
/// Subcommands: cavity, kerr, optimize, plot. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvconc::cli

#endif  // CVCONC_CLI_COMMANDS_HPP
