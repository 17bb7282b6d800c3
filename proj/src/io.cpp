#include "crime/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "crime/errors.hpp"

namespace crime::io {

std::string format_double(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& context) {
  double x = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ConfigError(context + ": cannot parse '" + tok + "' as a real number");
  return x;
}

void write_snapshot(const std::string& path, const Field& f, double t) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_snapshot: cannot open '" + path + "' for writing");
  const Grid& g = f.grid;
  out << g.nx << ' ' << g.ny << ' ' << format_double(g.lx) << ' ' << format_double(g.ly) << ' '
      << format_double(t) << '\n';
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i) out << ' ';
      out << format_double(f(i, j));
    }
    out << '\n';
  }
  if (!out) throw ConfigError("write_snapshot: write to '" + path + "' failed");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_snapshot: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_snapshot: '" + path + "' is empty");
  std::istringstream header(line);
  int nx = 0, ny = 0;
  std::string slx, sly, st;
  if (!(header >> nx >> ny >> slx >> sly >> st))
    throw ConfigError("read_snapshot: bad header in '" + path + "'");
  const double lx = parse_double(slx, path + " header lx");
  const double ly = parse_double(sly, path + " header ly");
  Snapshot snap;
  snap.t = parse_double(st, path + " header t");
  snap.field = Field(Grid::uniform(nx, ny, lx, ly));
  std::string tok;
  for (int k = 0; k < nx * ny; ++k) {
    if (!(in >> tok))
      throw ConfigError("read_snapshot: '" + path + "' ended after " + std::to_string(k) + " of " +
                        std::to_string(nx * ny) + " values");
    snap.field.data[k] = parse_double(tok, path + " value " + std::to_string(k));
  }
  return snap;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_csv: cannot open '" + path + "' for writing");
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw UsageError("write_csv: row width does not match header");
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
  if (!out) throw ConfigError("write_csv: write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("read_csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("read_csv: '" + path + "' is empty");
  std::istringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.columns.push_back(cell);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row_in(line);
    std::vector<double> row;
    while (std::getline(row_in, cell, ','))
      row.push_back(parse_double(cell, path + ":" + std::to_string(lineno)));
    if (row.size() != table.columns.size())
      throw ConfigError("read_csv: " + path + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(table.columns.size()) + " cells, got " +
                        std::to_string(row.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace crime::io
