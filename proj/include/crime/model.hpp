#pragma once

// Reaction terms, taxis coefficient, and a priori bound constants for the
// chemotaxis system
//
//   u_t = Lap u - chi div( (u/v) grad v ) - u v + rho u - mu u^{2+gamma}
//   v_t = Lap v - v + u v
//
// with homogeneous Neumann boundary conditions. eps > 0 switches on the
// smooth cutoff eta_eps(u) inside the taxis term (regularized system);
// eps = 0 is the original system (eta == 1).

#include <cmath>
#include <optional>

#include "crime/errors.hpp"

namespace crime {

struct Parameters {
  double rho = 0.0;    // linear growth rate (any sign)
  double mu = 1.0;     // logistic damping, > 0
  double chi = 1.0;    // taxis strength, > 0
  double gamma = 0.0;  // logistic exponent offset, >= 0 (u^{2+gamma} sink)
  double eps = 0.0;    // cutoff level in [0, 1]; 0 disables the cutoff

  // Oracle switch: false removes the u*v exchange terms from both equations
  // (used together with rho = mu = chi = 0 to reduce the scheme to pure heat
  // flow). Not reachable from config files, which enforce the invariants below.
  bool uv_coupling = true;

  void validate() const;  // throws DomainError if mu <= 0, chi <= 0, gamma < 0, or eps outside [0, 1]
};

// Smooth cutoff eta_eps: equal to 1 on [0, 1/eps - 1], equal to 0 on [1/eps, inf),
// quintic smoothstep (C^2) across the unit-width band in between, monotone
// nonincreasing in s and nondecreasing in eps. eta_0 == 1 identically.
inline double cutoff_eta(double eps, double s) {
  if (s < 0.0) throw DomainError("cutoff_eta: s must be nonnegative");
  if (eps == 0.0) return 1.0;
  const double x = s - (1.0 / eps - 1.0);
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  // 1 - S(x) with S the quintic smoothstep 6x^5 - 15x^4 + 10x^3.
  return 1.0 - x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

// Taxis mobility chi * eta_eps(u) * u / v. Requires v > 0.
inline double taxis_coefficient(double u, double v, const Parameters& p) {
  if (v <= 0.0) throw DomainError("taxis_coefficient: v must be positive");
  return p.chi * cutoff_eta(p.eps, u) * u / v;
}

// u^e for the exponents 1+gamma and 2+gamma; gamma = 0 stays in plain products
// so that the main case never goes through pow().
inline double pow1g(double u, double gamma) {
  return gamma == 0.0 ? u : std::pow(u, 1.0 + gamma);
}
inline double pow2g(double u, double gamma) {
  return gamma == 0.0 ? u * u : std::pow(u, 2.0 + gamma);
}

// -u v + rho u - mu u^{2+gamma}   (the u v term honors the oracle switch)
inline double reaction_u(double u, double v, const Parameters& p) {
  const double exchange = p.uv_coupling ? u * v : 0.0;
  return -exchange + p.rho * u - p.mu * pow2g(u, p.gamma);
}

// -v + u v
inline double reaction_v(double u, double v) { return -v + u * v; }

struct FixedPoint {
  double u = 0.0;
  double v = 0.0;
};

// Spatially homogeneous positive steady state (1, rho - mu), which exists iff
// rho > mu. Both reactions vanish there.
std::optional<FixedPoint> homogeneous_fixed_point(const Parameters& p);

// Constants of the L^1 a priori theory.
//
//   c1           ceiling for int(u + v):  max( (|rho|+1)^2 |Omega| / (4 mu), int(u0 + v0) )
//   c2_of_T      ceiling for int_0^T int u^2:  ( int(u0+v0) + T |rho| c1 ) / mu
//   k1_weak      comparison constant of the weak-solution theory,
//                ((1+|rho|)/(2+gamma))^{2+gamma} (1+gamma) / mu^{1+gamma} * |Omega|
struct BoundConstants {
  double c1 = 0.0;
  double k1_weak = 0.0;
  double initial_mass = 0.0;  // int(u0 + v0)
  double abs_rho = 0.0;
  double mu = 1.0;

  double c2_of_T(double T) const { return (initial_mass + T * abs_rho * c1) / mu; }
};

BoundConstants bound_constants(const Parameters& p, double omega_area, double initial_mass);

}  // namespace crime
