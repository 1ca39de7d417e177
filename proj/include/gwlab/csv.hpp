#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace gwlab {

/// Locale-independent, round-trip exact: 17 significant digits, '.' decimal.
std::string format_double(double x);

/// Minimal CSV writer with a fixed header; cells are numbers or plain text.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<Cell>& cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace gwlab
