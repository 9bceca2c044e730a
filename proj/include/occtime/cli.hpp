#pragma once

#include <iosfwd>

namespace occtime {

/// Process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitDomain = 3,
  kExitNumerical = 4,
};

/// Command-line front end: subcommands scale, omega-scale, exit, gerber-shiu,
/// mc-validate and table. CSV goes to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace occtime
