#pragma once

#include <iosfwd>

namespace dynav {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitCheckpoint = 4,
  kExitEmptyLog = 5,
  kExitOracleMismatch = 6,
};

/// Subcommands: train, eval, replay, oracle, dump-spectrogram, bench.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dynav
