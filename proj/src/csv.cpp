#include "phj/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace phj {

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out_ << header[i] << (i + 1 < header.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_)
    throw std::runtime_error("csv row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << csv_num(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw std::runtime_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

}  // namespace phj
