#pragma once

// Weak-form residual evaluation on recorded trajectories. Test functions are
// separable, phi(x, t) = psi(x) zeta(t), with psi a product of raised-cosine
// bumps compactly supported inside the domain (so grad psi . nu = 0 holds
// trivially) and zeta a Hann window in time. Spatial derivatives of psi are
// taken with the discrete operators (laplacian_neumann / gradient_centered),
// time derivatives of zeta with centered differences on the record lattice,
// and time integrals with the left-endpoint rectangle rule. Three relations
// are checked:
//
//   mass:  int u(T) - int u0  <=  -II uv + rho II u - mu II u^{2+gamma}
//   ln(u+1) inequality (tested): LHS - RHS >= 0 up to discretization slack
//   v identity (tested):         residual == 0 up to discretization slack
//
// where II denotes the space-time integral on the record lattice. Slack is
// 5 (dt + h) * scale, scale the sum of the absolute values of the terms.

#include <string>
#include <vector>

#include "crime/model.hpp"
#include "crime/stepper.hpp"

namespace crime {

struct TestFunction {
  std::string name;
  double cx = 0.5, cy = 0.5;  // bump center
  double wx = 0.3, wy = 0.3;  // bump half-widths; support [c-w, c+w]
  double t0 = 0.0, t1 = 1.0;  // zeta support
  // false: full Hann window (zeta = 0 at both ends). true: half window with
  // zeta(t0) = 1, which exercises the initial-data terms.
  bool from_zero = false;

  double psi(double x, double y) const;
  double zeta(double t) const;
};

// Five-member catalog spanning centers, widths, and windows inside [0, t_end];
// the last member has zeta(0) = 1.
std::vector<TestFunction> default_test_catalog(double t_end);

struct WeakformEntry {
  std::string test;
  double lnu_residual = 0.0;  // LHS - RHS of the ln(u+1) inequality
  double lnu_scale = 0.0;
  bool lnu_pass = false;
  double v_residual = 0.0;  // defect of the v identity
  double v_scale = 0.0;
  bool v_pass = false;
};

struct WeakformReport {
  double dt = 0.0;           // nominal step size of the producing run
  double h = 0.0;            // max(dx, dy)
  double slack_coeff = 5.0;  // slack = slack_coeff * (dt + h) * scale
  double mass_residual = 0.0;
  double mass_scale = 0.0;
  bool mass_pass = false;
  std::vector<WeakformEntry> entries;

  bool all_pass() const;
  double v_residual_rms() const;
};

// states must sit on a uniform time lattice (record outputs of run()).
WeakformReport weakform_residuals(const std::vector<State>& states, const Parameters& p,
                                  const std::vector<TestFunction>& tests, double dt_nominal);

}  // namespace crime
