#include "gwlab/csv.hpp"

#include <charconv>
#include <cmath>

#include "gwlab/errors.hpp"

namespace gwlab {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot write '" + path.string() + "'");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw Error("csv: row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_double(v);
          } else {
            out_ << v;
          }
        },
        cells[i]);
  }
  out_ << '\n';
}

}  // namespace gwlab
