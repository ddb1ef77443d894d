#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace ossa::csv {

// Minimal reader for the comma-separated files this project consumes: UTF-8,
// one header row, no quoting. Blank lines are skipped and a trailing '\r' is
// tolerated.
class Table {
 public:
  static Table read(std::istream& in, const std::string& source);
  static Table read_file(const std::string& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return cells_.size(); }

  // Column index by header name; throws MalformedInput if absent.
  std::size_t column(std::string_view name) const;

  const std::string& cell(std::size_t row, std::size_t col) const {
    return cells_[row][col];
  }
  std::int64_t as_int(std::size_t row, std::size_t col) const;
  double as_double(std::size_t row, std::size_t col) const;

  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> cells_;
  std::vector<std::size_t> line_numbers_;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

}  // namespace ossa::csv
