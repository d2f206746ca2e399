#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace csb::csv {

// Every file the library writes starts with this comment line.
inline constexpr std::string_view kSchemaLine = "# cs-bandits schema v1";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Splits one line on commas. No quoting support; fields are trimmed.
std::vector<std::string> split(std::string_view line);

std::string_view trim(std::string_view s);

/// Parses a full-field double; returns false on trailing garbage.
bool parse_double(std::string_view field, double& out);

// True for blank lines and `#` comment lines.
bool skippable(std::string_view line);

}  // namespace csb::csv
