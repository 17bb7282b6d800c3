#include "crime/model.hpp"

#include <cmath>

namespace crime {

void Parameters::validate() const {
  if (!(mu > 0.0)) throw DomainError("Parameters: mu must be > 0");
  if (!(chi > 0.0)) throw DomainError("Parameters: chi must be > 0");
  if (!(gamma >= 0.0)) throw DomainError("Parameters: gamma must be >= 0");
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("Parameters: eps must lie in [0, 1]");
  if (!std::isfinite(rho)) throw DomainError("Parameters: rho must be finite");
}

std::optional<FixedPoint> homogeneous_fixed_point(const Parameters& p) {
  if (!(p.rho > p.mu)) return std::nullopt;
  // u* solves rho - v* - mu u*^{1+gamma} = 0 with v* = u*^{... }: the only
  // homogeneous positive equilibrium is u* = 1 (from v_t = 0: v(u - 1) = 0),
  // and then v* = rho - mu * 1^{1+gamma} = rho - mu.
  return FixedPoint{1.0, p.rho - p.mu};
}

BoundConstants bound_constants(const Parameters& p, double omega_area, double initial_mass) {
  if (!(omega_area > 0.0)) throw DomainError("bound_constants: omega_area must be > 0");
  if (!(initial_mass >= 0.0)) throw DomainError("bound_constants: initial_mass must be >= 0");
  BoundConstants bc;
  bc.initial_mass = initial_mass;
  bc.abs_rho = std::abs(p.rho);
  bc.mu = p.mu;
  const double young = (bc.abs_rho + 1.0) * (bc.abs_rho + 1.0) * omega_area / (4.0 * p.mu);
  bc.c1 = std::max(young, initial_mass);
  bc.k1_weak = std::pow((1.0 + bc.abs_rho) / (2.0 + p.gamma), 2.0 + p.gamma) *
               (1.0 + p.gamma) / std::pow(p.mu, 1.0 + p.gamma) * omega_area;
  return bc;
}

}  // namespace crime
