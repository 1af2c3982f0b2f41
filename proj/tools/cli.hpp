#pragma once

#include <iosfwd>

namespace wavefront::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNegative = 2, kNumerical = 3 };

/// Runs one subcommand. Summaries go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wavefront::cli
