#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ddmag {

// Locale-independent decimal formatting with 17 significant digits
// (round-trip exact for IEEE doubles, '.' separator).
std::string format_double(double value);

// Minimal CSV emitter: optional '#'-prefixed header block, one header row,
// numeric rows formatted via format_double.
struct CsvTable {
  std::vector<std::string> comments;  // written as "# ..." lines
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& os) const;
};

}  // namespace ddmag
