#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace blowup {

/// "%.17g"
std::string format_double(double v);

/// Minimal CSV writer with fixed 17-significant-digit number formatting.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);
  /// Numeric columns followed by a trailing text column.
  void row(const std::vector<double>& values, const std::string& tail);

 private:
  std::ofstream out_;
};

}  // namespace blowup
