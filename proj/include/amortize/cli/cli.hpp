#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amortize::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args[0] is the program name). Returns the exit code;
/// messages go to `out` and diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amortize::cli
