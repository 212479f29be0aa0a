#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace christoffel::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericError = 3;

// Runs `christoffel <args...>` (args excludes the program name). Data goes
// to `out` unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace christoffel::cli
