#pragma once

// Uniform cell-centered grid on [0, lx] x [0, ly] and the scalar / vector
// fields living on it. Values are stored row-major (j * nx + i).

#include <vector>

#include "crime/errors.hpp"

namespace crime {

struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  static Grid uniform(int nx, int ny, double lx, double ly) {
    if (nx < 2 || ny < 2) throw DomainError("Grid: nx and ny must be >= 2");
    if (!(lx > 0.0) || !(ly > 0.0)) throw DomainError("Grid: lx and ly must be > 0");
    return Grid{nx, ny, lx, ly};
  }

  int size() const { return nx * ny; }
  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  double cell_area() const { return dx() * dy(); }
  double area() const { return lx * ly; }

  // Cell-center coordinates.
  double x(int i) const { return (i + 0.5) * dx(); }
  double y(int j) const { return (j + 0.5) * dy(); }

  bool operator==(const Grid&) const = default;
};

struct Field {
  Grid grid;
  std::vector<double> data;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0) : grid(g), data(g.size(), fill) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(j) * grid.nx + i]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(j) * grid.nx + i]; }
  int size() const { return grid.size(); }
};

// Cell-centered vector field (component arrays).
struct VectorField {
  Grid grid;
  std::vector<double> x;
  std::vector<double> y;

  VectorField() = default;
  explicit VectorField(const Grid& g) : grid(g), x(g.size(), 0.0), y(g.size(), 0.0) {}
};

inline void require_same_grid(const Field& a, const Field& b, const char* where) {
  if (!(a.grid == b.grid)) throw UsageError(std::string(where) + ": fields live on different grids");
}

}  // namespace crime
