#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mecsim::csv
{

// Shortest text that parses back to exactly the same double.
std::string format_double (double value);
std::string format_int (std::int64_t value);

std::string join_row (const std::vector<std::string> &fields);

// Minimal splitter for the files this project writes (no quoting).
std::vector<std::string> split_row (std::string_view line);

} // namespace mecsim::csv
