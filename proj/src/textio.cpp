#include "fedsim/textio.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fedsim {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : out_(path), path_(path) {
  if (!out_)
    throw std::runtime_error("cannot open for writing: " + path.string());
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  width_ = columns.size();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvValue>& values) {
  if (width_ != 0 && values.size() != width_)
    throw std::invalid_argument("csv row width does not match header: " +
                                path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    if (const auto* n = std::get_if<std::int64_t>(&values[i]))
      out_ << *n;
    else if (const auto* d = std::get_if<double>(&values[i]))
      out_ << format_double(*d);
    else
      out_ << std::get<std::string>(values[i]);
  }
  out_ << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
}

namespace {
std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}
}  // namespace

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open csv: " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("empty csv: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.columns.size())
      throw std::invalid_argument("ragged csv row in " + path.string());
    table.rows.push_back(std::move(fields));
  }
  return table;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::invalid_argument("csv column not found: " + name);
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const std::string& s = rows.at(row).at(col);
  std::size_t used = 0;
  const double value = std::stod(s, &used);
  if (used != s.size())
    throw std::invalid_argument("csv field is not a number: " + s);
  return value;
}

}  // namespace fedsim
