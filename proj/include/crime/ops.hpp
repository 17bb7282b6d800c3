#pragma once

// Spatial kernels on the uniform cell-centered grid. Everything here exists
// twice: crime::ops (OpenMP-parallel, the production path) and
// crime::ops::serial (plain loops, the reference used by tests and the
// benchmark). The two share their per-cell arithmetic and their reduction
// order, so results are identical down to the last bit for any thread count.
//
// Boundary treatment is homogeneous Neumann by ghost-cell reflection:
// the Laplacian sees a mirrored neighbor across each wall, taxis fluxes vanish
// on walls, and centered gradients set the wall-normal component to zero.

#include "crime/grid.hpp"
#include "crime/model.hpp"

namespace crime::ops {

// 5-point Laplacian with reflection ghosts. Row sums telescope, so
// integrate(laplacian_neumann(f)) vanishes to rounding.
Field laplacian_neumann(const Field& f);

// Centered gradient; wall-normal components are 0 at boundary cells.
VectorField gradient_centered(const Field& f);

// Discrete divergence of the upwind (donor-cell) taxis flux
//   q_face = chi * eta_eps(u_donor) * (u_donor / v_face) * (dv / h),
// v_face the arithmetic mean, donor chosen by the sign of dv, zero flux on
// walls. Returns the cell divergence (so u_t picks it up with a minus sign).
// Requires v > 0 everywhere.
Field taxis_divergence(const Field& u, const Field& v, const Parameters& p);

// Midpoint quadrature: sum f_ij * dx * dy in fixed row order.
double integrate(const Field& f);

// ( integrate |f|^p )^{1/p}, p >= 1.
double lp_norm(const Field& f, double p);

// integrate |grad (v^{p/2})|^2 using the centered gradient; requires v >= 0.
double grad_power_integral(const Field& v, double p);

// Deterministic reductions shared with the solver and diagnostics.
double min_value(const Field& f);
double max_value(const Field& f);
double max_abs(const Field& f);
double dot(const Field& a, const Field& b);

namespace serial {
Field laplacian_neumann(const Field& f);
VectorField gradient_centered(const Field& f);
Field taxis_divergence(const Field& u, const Field& v, const Parameters& p);
double integrate(const Field& f);
double lp_norm(const Field& f, double p);
double grad_power_integral(const Field& v, double p);
double min_value(const Field& f);
double max_value(const Field& f);
double max_abs(const Field& f);
double dot(const Field& a, const Field& b);
}  // namespace serial

}  // namespace crime::ops
