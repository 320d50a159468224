#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace modquad::cli {

/// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUnsatisfied = 1,  // also: saturated allocation, no design within budget
  kParseError = 2,
  kInvalidStructure = 3,
  kInvalidSeed = 4,
  kCapacity = 5,
};

/// Largest column count `hull` accepts (three modules).
inline constexpr long kHullCommandColumnLimit = 12;

/// Runs one command line (args excludes the program name). Normal output
/// goes to `out`, diagnostics to `err`; returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace modquad::cli
