#include "ddmag/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace ddmag {

std::string format_double(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", value);
  if (len < 0 || len >= static_cast<int>(sizeof(buf))) {
    throw std::runtime_error("format_double: formatting failed");
  }
  // snprintf with the C locale pinned by the callers; normalize just in case
  for (int i = 0; i < len; ++i) {
    if (buf[i] == ',') buf[i] = '.';
  }
  return std::string(buf, static_cast<std::size_t>(len));
}

void CsvTable::write(std::ostream& os) const {
  for (const std::string& c : comments) os << "# " << c << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw std::runtime_error("CsvTable: row width mismatch");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << format_double(row[i]) << (i + 1 < row.size() ? "," : "");
    }
    os << "\n";
  }
}

}  // namespace ddmag
