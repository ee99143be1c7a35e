#pragma once

#include <iosfwd>

namespace ofpca::cli {

/// Exit codes: 0 success (including partial fits), 2 input error, 3 numeric error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;

/// Runs the ofpca command line. Subcommands: fit, simulate, mise, scores,
/// export-plots. Writes human-readable output to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ofpca::cli
