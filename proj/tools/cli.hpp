#pragma once

#include <iosfwd>

namespace fraudgame::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kRegime = 3,
};

/// Entry point of the `fraudgame` tool, with the streams injectable for tests.
/// Subcommands: solve, curves, simulate, verify, best-response.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fraudgame::cli
