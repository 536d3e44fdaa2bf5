#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace phj {

// Formats a double with enough digits to round-trip exactly, so reruns with
// the same config and seed produce byte-identical files.
std::string csv_num(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  // Mixed row: any cell may be free text (labels) or a number.
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_;
};

}  // namespace phj
