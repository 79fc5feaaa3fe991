#pragma once

// Command-line front end: eval, zeros, verify, sweep, sigma, steinerberger.

#include <iosfwd>
#include <string>
#include <vector>

namespace oscilla::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFail = 2;
inline constexpr int kExitIndeterminate = 3;
inline constexpr int kExitUsage = 64;

/// `args` excludes the program name. Output goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oscilla::cli
