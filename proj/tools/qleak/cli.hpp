#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qleak::cli {

// Exit statuses of the qleak tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitChain = 4;

// Runs one command. args excludes the program name. Results go to `out`
// unless --output is given; diagnostics go to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Six decimals, or "inf".
std::string FormatBits(double v);

}  // namespace qleak::cli
