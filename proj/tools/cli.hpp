#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace poissonk::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitComputation = 2;
inline constexpr int kExitVerification = 3;

// Runs the command line `args` (args[0] is the program name). Data goes to
// `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace poissonk::cli
