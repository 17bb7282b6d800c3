#pragma once

// Experiment drivers: initial conditions, a single instrumented run, the
// eps-sweep and gamma-comparison studies, and the analytic heat-flow oracle.

#include <string>
#include <vector>

#include "crime/config.hpp"
#include "crime/diagnostics.hpp"
#include "crime/stepper.hpp"

namespace crime {

// Initial state per the IC spec; u0 >= 0, v0 > 0 everywhere (validated).
State make_initial(const IcSpec& ic, const Grid& grid, const Parameters& p);

struct SimOutput {
  RunResult result;
  std::vector<DiagnosticsRecord> records;
  std::vector<State> states;  // record-lattice snapshots; kept only on request
  BoundConstants bc;
  double v0_min = 0.0;
  double dt_nominal = 0.0;
  double h = 0.0;  // max(dx, dy)

  bool failed() const {
    return result.outcome != RunOutcome::completed && result.outcome != RunOutcome::blowup;
  }
};

// Runs cfg from its configured IC, computing a diagnostics record at every
// output time (cumulatives advance by the left-endpoint rule).
SimOutput simulate(const RunConfig& cfg, bool keep_states);

// Bound verdicts for a finished run: l1 ceiling, u2 time integral (+ gamma>0
// companion), v lower bound.
std::vector<Verdict> run_verdicts(const SimOutput& sim, const Parameters& p);

struct SweepRow {
  double eps_hi = 0.0;  // larger eps of the pair
  double eps_lo = 0.0;
  double d_lnu = 0.0;   // || ln(u_lo+1) - ln(u_hi+1) ||_{L2(Omega x (0,T))}
  double d_v = 0.0;     // || v_lo - v_hi ||_{L2}
  double d_gradv = 0.0; // || grad v_lo - grad v_hi ||_{L2}
  double d_u_lp = 0.0;  // || u_lo - u_hi ||_{L^{3/2}}
  bool valid = false;   // both member runs completed
};

struct SweepReport {
  std::vector<double> ladder;
  std::vector<bool> run_ok;      // per rung
  std::vector<double> sup_linf_u;  // per rung: sup over records of ||u||_inf
  std::vector<SweepRow> rows;    // consecutive pairs
  bool monotone_v = true;        // d_v nonincreasing over valid rows
  bool monotone_gradv = true;
  bool all_zero = true;          // every valid distance exactly 0
};

// Runs cfg once per ladder entry (eps = rung, t_end = T) on identical grids
// and lattices; distances by rectangle-rule quadrature on the record lattice.
SweepReport eps_sweep(const RunConfig& cfg, const std::vector<double>& ladder, double T);

io::CsvTable sweep_to_csv(const SweepReport& rep);

struct GammaRow {
  double gamma = 0.0;
  double T = 0.0;
  double sup_linf_u = 0.0;  // sup over records with t <= T
  double sup_linf_v = 0.0;
  bool ok = false;
};

struct GammaCompareReport {
  std::vector<GammaRow> rows;  // one per (gamma, horizon), gamma-major order
  // Per gamma: true if that gamma's maxima agree within 1% across all horizons.
  // Only meaningful (and only asserted) for gamma > 0 rows.
  std::vector<double> gammas;
  std::vector<bool> stabilized;
  std::vector<bool> gamma_ok;
};

GammaCompareReport gamma_compare(const RunConfig& cfg, const std::vector<double>& gammas,
                                 const std::vector<double>& horizons);

io::CsvTable gamma_compare_to_csv(const GammaCompareReport& rep);

// Pure heat flow oracle: chi = rho = mu = 0, uv coupling off,
// u0 = 1 + 0.5 cos(pi x/lx) cos(pi y/ly), exact solution
// 1 + 0.5 e^{-pi^2 (1/lx^2 + 1/ly^2) t} cos cos. Returns the space-time L2
// error on the record lattice.
double heat_oracle_error(const Grid& grid, double dt, double t_end);

// Least-squares slope of log(y) vs log(x).
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace crime
