#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace malab {

/// Shortest-roundtrip-safe rendering with 17 significant digits.
std::string format_double(double value);

/// Minimal CSV writer: header row then numeric rows, full precision.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  /// Leading text cells followed by numeric cells.
  void row(const std::vector<std::string>& labels, const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Parses a purely numeric CSV with one header row.
CsvTable read_csv(std::istream& in);

}  // namespace malab
