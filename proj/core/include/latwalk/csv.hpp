#pragma once

#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace latwalk {

/// Quotes a field when it holds a comma, quote, or line break.
std::string csv_field(std::string_view text);

/// Comma-separated rows with a header; doubles use the shortest round-trip form.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(const std::vector<std::string>& names) { write(names); }

  template <class... Fields>
  void row(const Fields&... fields) {
    std::vector<std::string> cells;
    (cells.push_back(cell(fields)), ...);
    write(cells);
  }

  void write(const std::vector<std::string>& cells);

 private:
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(std::string_view s) { return std::string(s); }
  static std::string cell(const char* s) { return s; }
  static std::string cell(bool b) { return b ? "true" : "false"; }
  static std::string cell(double x);
  template <std::integral T>
  static std::string cell(T v) {
    return std::to_string(v);
  }

  std::ostream& out_;
};

}  // namespace latwalk
