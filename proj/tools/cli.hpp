#pragma once
// In-process entry point for the command-line tool, separated from main() so
// tests can drive it and capture both streams.

#include <ostream>
#include <string>
#include <vector>

namespace psq::cli {

// args in natural order, without the program name.  Exit codes: 0 success,
// 1 usage/validation error or failed verification, 2 internal consistency
// failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace psq::cli
