#include "ossa/csv.hpp"

#include <charconv>
#include <fstream>

#include "ossa/error.hpp"

namespace ossa::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
  while (end > begin &&
         (s[end - 1] == ' ' || s[end - 1] == '\t' || s[end - 1] == '\r')) {
    --end;
  }
  return std::string(s.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

Table Table::read(std::istream& in, const std::string& source) {
  Table table;
  table.source_ = source;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 &&
        line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    auto fields = split(line);
    if (!have_header) {
      table.header_ = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header_.size()) {
      throw Error(ErrorCode::kMalformedInput,
                  source + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(table.header_.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    table.cells_.push_back(std::move(fields));
    table.line_numbers_.push_back(line_no);
  }
  if (!have_header) {
    throw Error(ErrorCode::kEmptyInput, source + ": no header row");
  }
  return table;
}

Table Table::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read(in, path);
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t j = 0; j < header_.size(); ++j) {
    if (header_[j] == name) return j;
  }
  throw Error(ErrorCode::kMalformedInput,
              source_ + ": missing column '" + std::string(name) + "'");
}

std::int64_t Table::as_int(std::size_t row, std::size_t col) const {
  const std::string& text = cells_[row][col];
  std::int64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kMalformedInput,
                source_ + ":" + std::to_string(line_numbers_[row]) +
                    ": expected an integer in column '" + header_[col] +
                    "', got '" + text + "'");
  }
  return value;
}

double Table::as_double(std::size_t row, std::size_t col) const {
  const std::string& text = cells_[row][col];
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kMalformedInput,
              source_ + ":" + std::to_string(line_numbers_[row]) +
                  ": expected a number in column '" + header_[col] +
                  "', got '" + text + "'");
}

}  // namespace ossa::csv
