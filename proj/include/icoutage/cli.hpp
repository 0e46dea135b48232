#pragma once

#include <iosfwd>

namespace icoutage {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitConverse = 3,
  kExitCheck = 4,
};

/// Entry point of the ic_outage tool. Subcommands: analyze, sweep, simulate.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace icoutage
