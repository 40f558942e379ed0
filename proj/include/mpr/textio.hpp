#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mpr {

// Shortest decimal string that round-trips the exact double (to_chars).
std::string format_double(double v);

// Strict double parse of the whole token; throws std::invalid_argument.
double parse_double(std::string_view token);

// Split one CSV line on commas and parse every field as a double.
std::vector<double> parse_csv_doubles(std::string_view line);

}  // namespace mpr
