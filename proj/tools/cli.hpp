#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ceq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitEulerFailed = 3;

/// Runs one command line (args excludes the program name). Results go to
/// `out` or to files named by the flags, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ceq::cli
