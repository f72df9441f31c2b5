#include "latwalk/csv.hpp"

#include "latwalk/ensemble_io.hpp"

namespace latwalk {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string CsvWriter::cell(double x) { return format_double(x); }

void CsvWriter::write(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(cells[i]);
  }
  out_ << "\r\n";
}

}  // namespace latwalk
