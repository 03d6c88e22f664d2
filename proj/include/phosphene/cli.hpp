#pragma once

#include <iosfwd>

namespace phosphene {

// Exit codes: 0 success, 1 runtime or fit failure, 2 usage or input error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point behind the `phosphene` executable. Subcommands: fit, predict,
// evaluate, sweep, export-plot.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phosphene
