#ifndef BISCV_CLI_HPP
#define BISCV_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace biscv::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitUsage = 64;

/// Environment variable that overrides the default grid size.
inline constexpr const char* kGridPointsEnv = "BISCV_GRID_POINTS";

/// Runs one subcommand. `args` excludes the program name. Documents go to
/// `out` (or the --output file), usage messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace biscv::cli

#endif  // BISCV_CLI_HPP
