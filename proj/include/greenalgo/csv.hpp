#pragma once

// Minimal reader for the project's CSV dialect: comma separated, UTF-8,
// LF or CRLF line endings, no quoting. Blank lines are skipped.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "greenalgo/errors.hpp"

namespace greenalgo::csv {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(ws);
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

inline std::optional<long long> parse_integer(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return std::nullopt;
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

struct Row {
  std::size_t line = 0;  // 1-based, counting the header
  std::vector<std::string> cells;
};

/// Reads a table whose first line must equal `header` exactly (after
/// trimming and removal of a UTF-8 BOM). Every data row must have the same
/// number of cells as the header.
inline std::vector<Row> read_table(std::istream& in, std::string_view header) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<Row> rows;
  const std::size_t columns = split(header).size();
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (!have_header) {
      if (trim(view) != header) {
        throw DataError("bad_header", line_no, std::string(trim(view)),
                        "line " + std::to_string(line_no) + ": expected header '" + std::string(header) + "'");
      }
      have_header = true;
      continue;
    }
    Row row{line_no, split(view)};
    if (row.cells.size() != columns) {
      throw DataError("malformed_row", line_no, {},
                      "line " + std::to_string(line_no) + ": expected " + std::to_string(columns) + " columns, got " +
                          std::to_string(row.cells.size()));
    }
    rows.push_back(std::move(row));
  }
  if (in.bad()) throw IoError("read failure");
  if (!have_header) throw DataError("bad_header", 0, {}, "missing header '" + std::string(header) + "'");
  return rows;
}

inline double require_double(const Row& row, std::size_t column, std::string_view field) {
  auto value = parse_double(row.cells.at(column));
  if (!value) {
    throw DataError("malformed_row", row.line, std::string(field),
                    "line " + std::to_string(row.line) + ": " + std::string(field) + " is not a number: '" +
                        row.cells[column] + "'");
  }
  return *value;
}

inline long long require_integer(const Row& row, std::size_t column, std::string_view field) {
  auto value = parse_integer(row.cells.at(column));
  if (!value) {
    throw DataError("malformed_row", row.line, std::string(field),
                    "line " + std::to_string(row.line) + ": " + std::string(field) + " is not an integer: '" +
                        row.cells[column] + "'");
  }
  return *value;
}

/// Shortest text that parses back to the same double.
inline std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ec == std::errc{} ? ptr : buf);
}

}  // namespace greenalgo::csv
