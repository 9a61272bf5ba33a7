#pragma once

#include <string>
#include <string_view>

namespace symstable {

/// Shortest round-trip decimal form; identical bytes on every run.
std::string format_double(double value);

/// Parses a full token as a double, or returns false.
bool parse_double(std::string_view text, double& out);

}  // namespace symstable
