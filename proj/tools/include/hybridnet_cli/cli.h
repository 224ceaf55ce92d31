#ifndef HYBRIDNET_CLI_CLI_H
#define HYBRIDNET_CLI_CLI_H

#include <iosfwd>

namespace hybridnet::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // solver failure on valid input
inline constexpr int kExitUsage = 2;       // bad arguments or malformed input
inline constexpr int kExitIo = 3;          // unreadable or unwritable file
inline constexpr int kExitCapability = 4;  // request beyond what is supported

// Entry point of the `hybridnet` tool. Human-readable output goes to `out`,
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridnet::cli

#endif  // HYBRIDNET_CLI_CLI_H
