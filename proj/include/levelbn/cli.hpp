#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace levelbn {

enum ExitCode : int {
  kExitOk = 0,
  /// Bad input data, I/O failure, or an oracle mismatch.
  kExitFailure = 1,
  kExitUsage = 2,
  /// A size or memory limit refused the run before any DP allocation, or an
  /// argument was outside its domain (unknown column, overlapping sets).
  kExitRefused = 3,
};

/// Entry point of the levelbn tool. args excludes the program name.
/// Subcommands: learn, score, bench, oracle-check, generate, profile.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace levelbn
