#ifndef FUZZBIS_CLI_HPP
#define FUZZBIS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace fuzzbis {

/// Exit codes shared by every command.
inline constexpr int kExitOk = 0;            // property holds / success
inline constexpr int kExitViolated = 1;      // property violated (report)
inline constexpr int kExitUsage = 2;         // usage / validation / gating
inline constexpr int kExitNoConvergence = 3; // solver ran out of iterations

/// Runs one command line (without the program name) against the given
/// streams; the `suite` command re-enters this for each manifest job.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace fuzzbis

#endif  // FUZZBIS_CLI_HPP
