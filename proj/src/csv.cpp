#include "mecsim/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mecsim::csv
{

std::string
format_double (double value)
{
  if (std::isinf (value))
    return value > 0 ? "inf" : "-inf";
  if (std::isnan (value))
    return "nan";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars (buf.data (), buf.data () + buf.size (), value);
  if (ec != std::errc{})
    throw std::runtime_error ("format_double: to_chars failed");
  return std::string (buf.data (), end);
}

std::string
format_int (std::int64_t value)
{
  return std::to_string (value);
}

std::string
join_row (const std::vector<std::string> &fields)
{
  std::string row;
  for (std::size_t i = 0; i < fields.size (); ++i)
    {
      if (i)
        row += ',';
      row += fields[i];
    }
  return row;
}

std::vector<std::string>
split_row (std::string_view line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true)
    {
      const auto comma = line.find (',', start);
      if (comma == std::string_view::npos)
        {
          out.emplace_back (line.substr (start));
          break;
        }
      out.emplace_back (line.substr (start, comma - start));
      start = comma + 1;
    }
  return out;
}

} // namespace mecsim::csv
