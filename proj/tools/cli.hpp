#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roembed::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInputError = 1;   // parse, malformed input, precondition
inline constexpr int kFailed = 2;       // guarantee failure or counterexample
inline constexpr int kSizeLimit = 3;    // SizeLimitExceeded

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace roembed::cli
