#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lexbias::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Entry point shared by the binary and the tests. args[0] is the program
// name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace lexbias::cli
