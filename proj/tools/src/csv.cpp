#include "optokerr/cli/csv.hpp"

#include <charconv>
#include <cmath>

namespace optokerr::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void CsvWriter::comment(std::string_view text) { out_ << "# " << text << '\n'; }

void CsvWriter::comment(std::string_view key, double value) {
  out_ << "# " << key << " = " << format_number(value) << '\n';
}

void CsvWriter::comment(std::string_view key, std::string_view value) {
  out_ << "# " << key << " = " << value << '\n';
}

void CsvWriter::header(const std::vector<std::string>& cols) { row(cols); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      out_ << '"';
      for (char ch : c) {
        if (ch == '"') out_ << '"';
        out_ << ch;
      }
      out_ << '"';
    } else {
      out_ << c;
    }
  }
  out_ << '\n';
}

std::string cell(double v) { return format_number(v); }
std::string cell(bool v) { return v ? "1" : "0"; }
std::string cell(long long v) { return std::to_string(v); }
std::string cell_or_empty(bool present, double v) { return present ? format_number(v) : ""; }

}  // namespace optokerr::cli
