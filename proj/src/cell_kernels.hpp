#pragma once

// Per-cell arithmetic shared by the OpenMP and serial kernel variants.
// Keeping one definition of each cell formula (plus -ffp-contract=off) is what
// makes the two variants bit-identical.

#include "crime/grid.hpp"
#include "crime/model.hpp"

namespace crime::ops::detail {

// Reflected-neighbor reads.
inline double west(const Field& f, int i, int j) { return i > 0 ? f(i - 1, j) : f(i, j); }
inline double east(const Field& f, int i, int j) { return i < f.grid.nx - 1 ? f(i + 1, j) : f(i, j); }
inline double south(const Field& f, int i, int j) { return j > 0 ? f(i, j - 1) : f(i, j); }
inline double north(const Field& f, int i, int j) { return j < f.grid.ny - 1 ? f(i, j + 1) : f(i, j); }

inline double laplacian_cell(const Field& f, int i, int j, double inv_dx2, double inv_dy2) {
  const double c = f(i, j);
  const double fx = (west(f, i, j) - c) + (east(f, i, j) - c);
  const double fy = (south(f, i, j) - c) + (north(f, i, j) - c);
  return fx * inv_dx2 + fy * inv_dy2;
}

inline double grad_x_cell(const Field& f, int i, int j, double inv_2dx) {
  if (i == 0 || i == f.grid.nx - 1) return 0.0;  // wall-normal component vanishes
  return (f(i + 1, j) - f(i - 1, j)) * inv_2dx;
}

inline double grad_y_cell(const Field& f, int i, int j, double inv_2dy) {
  if (j == 0 || j == f.grid.ny - 1) return 0.0;
  return (f(i, j + 1) - f(i, j - 1)) * inv_2dy;
}

// Upwind taxis flux through the face between cells L and R (L at lower index),
// divided by the face spacing h of that direction. Positive = flow from L to R.
inline double taxis_face_flux(double uL, double uR, double vL, double vR, const Parameters& p,
                              double inv_h) {
  const double dv = vR - vL;
  if (dv == 0.0) return 0.0;
  const double uup = dv > 0.0 ? uL : uR;
  if (uup == 0.0) return 0.0;
  const double vf = 0.5 * (vL + vR);
  return p.chi * cutoff_eta(p.eps, uup) * (uup / vf) * (dv * inv_h);
}

// Divergence of the taxis flux at cell (i, j); wall faces carry zero flux.
inline double taxis_div_cell(const Field& u, const Field& v, int i, int j, const Parameters& p,
                             double inv_dx, double inv_dy) {
  const int nx = u.grid.nx, ny = u.grid.ny;
  const double qe = i < nx - 1 ? taxis_face_flux(u(i, j), u(i + 1, j), v(i, j), v(i + 1, j), p, inv_dx) : 0.0;
  const double qw = i > 0 ? taxis_face_flux(u(i - 1, j), u(i, j), v(i - 1, j), v(i, j), p, inv_dx) : 0.0;
  const double qn = j < ny - 1 ? taxis_face_flux(u(i, j), u(i, j + 1), v(i, j), v(i, j + 1), p, inv_dy) : 0.0;
  const double qs = j > 0 ? taxis_face_flux(u(i, j - 1), u(i, j), v(i, j - 1), v(i, j), p, inv_dy) : 0.0;
  return (qe - qw) * inv_dx + (qn - qs) * inv_dy;
}

// Sum of the outflow rates that multiply u(i,j) in the explicit stage: taxis
// outflow through faces where (i,j) is the donor, the v sink, the negative part
// of rho, and the logistic sink. dt * rate < 1 keeps u* nonnegative.
inline double explicit_sink_rate_cell(const Field& u, const Field& v, int i, int j,
                                      const Parameters& p, double inv_dx2, double inv_dy2) {
  const int nx = u.grid.nx, ny = u.grid.ny;
  const double ui = u(i, j);
  const double vi = v(i, j);
  double taxis = 0.0;
  if (p.chi > 0.0 && ui > 0.0) {
    const double eta_u = cutoff_eta(p.eps, ui);
    if (eta_u > 0.0) {
      auto donor_rate = [&](double vn, double inv_h2) {
        const double dv = vn - vi;
        if (dv <= 0.0) return 0.0;
        return dv / (0.5 * (vi + vn)) * inv_h2;
      };
      double r = 0.0;
      if (i < nx - 1) r += donor_rate(v(i + 1, j), inv_dx2);
      if (i > 0) r += donor_rate(v(i - 1, j), inv_dx2);
      if (j < ny - 1) r += donor_rate(v(i, j + 1), inv_dy2);
      if (j > 0) r += donor_rate(v(i, j - 1), inv_dy2);
      taxis = p.chi * eta_u * r;
    }
  }
  const double exchange = p.uv_coupling ? vi : 0.0;
  const double rho_minus = p.rho < 0.0 ? -p.rho : 0.0;
  return taxis + exchange + rho_minus + p.mu * pow1g(ui, p.gamma);
}

}  // namespace crime::ops::detail
