#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wavesim {

/// Six significant digits, the numeric convention for every text output.
std::string format_sig6(double value);
/// Fixed number of fractional digits.
std::string format_fixed(double value, int digits);
/// Shortest text that parses back to the same double.
std::string format_shortest(double value);
/// Strict number parse: the whole field must be consumed.
bool parse_double(std::string_view text, double& out) noexcept;
std::vector<std::string_view> split(std::string_view text, char delimiter);
std::string_view trim(std::string_view text) noexcept;

}  // namespace wavesim
