#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace fedsim {

// Decimal with 17 significant digits: enough for doubles to round-trip
// exactly through text. All file formats in this project use it.
std::string format_double(double value);

// One field of a CSV row.
using CsvValue = std::variant<std::int64_t, double, std::string>;

// Streams rows to disk; doubles go through format_double. Fields never need
// quoting here (no commas in any emitted string), so none is applied.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<CsvValue>& values);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t width_ = 0;
};

// Fully materialised CSV contents, for plotting and round-trip tests.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  static CsvTable read(const std::filesystem::path& path);

  // Column index by name; throws std::invalid_argument when absent.
  std::size_t column(const std::string& name) const;
  bool has_column(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;
};

}  // namespace fedsim
