#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace g2kit::cli {

enum ExitCode : int { kOk = 0, kVerdictFalse = 1, kUsage = 2 };

/// Parses "x1,x2,...". Throws std::invalid_argument on malformed input or,
/// when expected > 0, on a count mismatch.
std::vector<double> parse_reals(std::string_view text, std::size_t expected = 0);
std::vector<std::int64_t> parse_ints(std::string_view text, std::size_t expected = 0);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace g2kit::cli
