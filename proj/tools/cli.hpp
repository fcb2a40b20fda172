#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace twistlap::cli {

// Stable exit codes.
inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kUsage = 2;
inline constexpr int kNumerical = 3;

/// Parses args (without the program name) and runs one subcommand.
/// Results go to `out` unless --out names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "-1..-6", "-3" or "-1,-2,-5".  Throws twistlap::InvalidParameter.
std::vector<int> parse_degrees(const std::string& text);
/// "100,200,400".  Throws twistlap::InvalidParameter.
std::vector<int> parse_grids(const std::string& text);

/// 17 significant digits, '.' decimal, no grouping.
std::string format_real(double x);

}  // namespace twistlap::cli
