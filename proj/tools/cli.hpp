#pragma once

#include <iosfwd>

namespace permx::cli {

/// Exit codes, one per error category.
enum ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kIo = 3,
  kFormat = 4,
  kEntropyExhausted = 5,
  kInternal = 6,
};

/// Runs the command line. Normal output goes to `out`; diagnostics, each
/// prefixed "permx: error[<category>]:", go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace permx::cli
