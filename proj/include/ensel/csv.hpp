#pragma once

// Minimal RFC 4180 subset: quoted fields with doubled quotes, no embedded
// line breaks.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ensel::csv {

std::vector<std::string> parse_line(std::string_view line);
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;  // 1-based source line of each row

  // Index of a header column; throws DataError naming `source` if absent.
  std::size_t column(std::string_view name, std::string_view source = "csv") const;
};

// Reads a header line and all rows; rows must have the header's width.
Table read(std::istream& in, std::string_view source = "csv");

// "%.17g": parses back to the identical double.
std::string format_double(double v);

}  // namespace ensel::csv
