#include <cmath>

#include "cell_kernels.hpp"
#include "crime/ops.hpp"
#include "det_reduce.hpp"

// Reference implementations: same per-cell arithmetic and reduction order as
// crime::ops, plain loops instead of OpenMP.

namespace crime::ops::serial {

using detail::det_fold_serial;
using detail::det_sum_serial;

Field laplacian_neumann(const Field& f) {
  const Grid& g = f.grid;
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double inv_dy2 = 1.0 / (g.dy() * g.dy());
  Field out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = detail::laplacian_cell(f, i, j, inv_dx2, inv_dy2);
  return out;
}

VectorField gradient_centered(const Field& f) {
  const Grid& g = f.grid;
  const double inv_2dx = 1.0 / (2.0 * g.dx());
  const double inv_2dy = 1.0 / (2.0 * g.dy());
  VectorField out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const size_t k = static_cast<size_t>(j) * g.nx + i;
      out.x[k] = detail::grad_x_cell(f, i, j, inv_2dx);
      out.y[k] = detail::grad_y_cell(f, i, j, inv_2dy);
    }
  return out;
}

Field taxis_divergence(const Field& u, const Field& v, const Parameters& p) {
  require_same_grid(u, v, "taxis_divergence");
  if (!(min_value(v) > 0.0)) throw DomainError("taxis_divergence: v must be positive everywhere");
  const Grid& g = u.grid;
  const double inv_dx = 1.0 / g.dx();
  const double inv_dy = 1.0 / g.dy();
  Field out(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) out(i, j) = detail::taxis_div_cell(u, v, i, j, p, inv_dx, inv_dy);
  return out;
}

double integrate(const Field& f) {
  const Grid& g = f.grid;
  return det_sum_serial(g.nx, g.ny, [&](int i, int j) { return f(i, j); }) * g.cell_area();
}

double lp_norm(const Field& f, double p) {
  if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
  const Grid& g = f.grid;
  double s;
  if (p == 1.0)
    s = det_sum_serial(g.nx, g.ny, [&](int i, int j) { return std::abs(f(i, j)); });
  else if (p == 2.0)
    s = det_sum_serial(g.nx, g.ny, [&](int i, int j) { return f(i, j) * f(i, j); });
  else
    s = det_sum_serial(g.nx, g.ny, [&](int i, int j) { return std::pow(std::abs(f(i, j)), p); });
  return std::pow(s * g.cell_area(), 1.0 / p);
}

double grad_power_integral(const Field& v, double p) {
  if (!(p >= 1.0)) throw DomainError("grad_power_integral: p must be >= 1");
  if (!(min_value(v) >= 0.0)) throw DomainError("grad_power_integral: v must be nonnegative");
  const Grid& g = v.grid;
  Field w(g);
  const double half_p = 0.5 * p;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) w(i, j) = p == 2.0 ? v(i, j) : std::pow(v(i, j), half_p);
  const VectorField grad = gradient_centered(w);
  return det_sum_serial(g.nx, g.ny,
                        [&](int i, int j) {
                          const size_t k = static_cast<size_t>(j) * g.nx + i;
                          return grad.x[k] * grad.x[k] + grad.y[k] * grad.y[k];
                        }) *
         g.cell_area();
}

double min_value(const Field& f) {
  if (f.data.empty()) throw UsageError("min_value: empty field");
  return det_fold_serial(
      f.grid.nx, f.grid.ny, [&](int i, int j) { return f(i, j); },
      [](double a, double b) { return b < a ? b : a; }, f.data[0]);
}

double max_value(const Field& f) {
  if (f.data.empty()) throw UsageError("max_value: empty field");
  return det_fold_serial(
      f.grid.nx, f.grid.ny, [&](int i, int j) { return f(i, j); },
      [](double a, double b) { return b > a ? b : a; }, f.data[0]);
}

double max_abs(const Field& f) {
  return det_fold_serial(
      f.grid.nx, f.grid.ny, [&](int i, int j) { return std::abs(f(i, j)); },
      [](double a, double b) { return b > a ? b : a; }, 0.0);
}

double dot(const Field& a, const Field& b) {
  require_same_grid(a, b, "dot");
  return det_sum_serial(a.grid.nx, a.grid.ny, [&](int i, int j) { return a(i, j) * b(i, j); });
}

}  // namespace crime::ops::serial
