#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace optokerr::cli {

// Shortest round-trip decimal form.
std::string format_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(std::string_view text);
  void comment(std::string_view key, double value);
  void comment(std::string_view key, std::string_view value);
  void header(const std::vector<std::string>& cols);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
};

std::string cell(double v);
std::string cell(bool v);
std::string cell(long long v);
std::string cell_or_empty(bool present, double v);

}  // namespace optokerr::cli
