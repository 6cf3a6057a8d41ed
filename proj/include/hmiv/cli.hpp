#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hmiv::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolated = 1;  // check: a property is violated; coexec: divergences found
inline constexpr int kUnknown = 2;   // check: a verdict is unknown
inline constexpr int kInputError = 3;
inline constexpr int kBindError = 4;

// `hmiv <command> ...` without the program name. Output is deterministic
// for a given input and flags.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in);

}  // namespace hmiv::cli
