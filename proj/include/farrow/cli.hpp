#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace farrow::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,        // unknown flag, missing argument
  kBadRatio = 3,     // --ratio not of the form P/Q with positive integers
  kBadConfig = 4,    // value out of range, unknown kind or format
  kIoFailure = 5,    // unreadable input, unwritable output
  kBadFormat = 6,    // malformed or mismatched file contents
};

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace farrow::cli
