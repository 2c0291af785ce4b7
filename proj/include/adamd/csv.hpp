#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace adamd::csv {

// Dialect: comma separator, '.' decimal point, header on line 1, LF line
// endings, values rendered with 17 significant digits so 64-bit floats
// round-trip exactly.

inline std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  }
};

inline std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) out += ',';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

/// Parse failure carrying the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

inline double parse_field(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line_no, "cannot parse numeric field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace detail

inline Table parse_csv(std::string_view text) {
  Table table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) {
      if (pos >= text.size()) break;  // trailing newline
      throw ParseError(line_no, "empty line");
    }
    const auto fields = detail::split_fields(line);
    if (line_no == 1) {
      for (auto f : fields) table.header.emplace_back(f);
      if (table.header.empty()) throw ParseError(1, "empty header");
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(line_no, "expected " + std::to_string(table.header.size()) +
                                    " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(detail::parse_field(f, line_no));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError(1, "empty input");
  return table;
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed while writing '" + path + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

inline Table read_csv_file(const std::string& path) { return parse_csv(read_file(path)); }

}  // namespace adamd::csv
