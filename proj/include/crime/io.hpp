#pragma once

// File formats. All real numbers are written with shortest round-trip decimal
// formatting (std::to_chars) and parsed with std::from_chars, so write/read is
// bit-exact.

#include <string>
#include <vector>

#include "crime/grid.hpp"

namespace crime::io {

std::string format_double(double x);
double parse_double(const std::string& tok, const std::string& context);

struct Snapshot {
  Field field;
  double t = 0.0;
};

// Layout: header line "nx ny lx ly t", then the nx*ny cell values row-major,
// one grid row per line.
void write_snapshot(const std::string& path, const Field& f, double t);
Snapshot read_snapshot(const std::string& path);

// Generic CSV with a header row; all cells are doubles.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace crime::io
