#pragma once

// IMEX time integration: taxis and reactions explicit, diffusion implicit.
// The v-equation's linear decay is folded into the implicit solve, i.e. one
// step maps (u, v) to (u', v') via
//
//   u* = u + dt * ( -div q(u, v) + reaction_u(u, v) )
//   v* = v + dt * ( u v )                     (growth part only)
//   (I - dt Lap_h) u' = u*
//   ((1+dt) I - dt Lap_h) v' = v*
//
// Nonnegativity of u* is enforced by restricting dt so that the total explicit
// outflow rate per cell stays below cfl_safety; values are never clamped. The
// implicit solves satisfy a discrete maximum principle (min x >= min b / a), so
// they preserve nonnegativity of u and map v* >= v_n into
// v' >= v_n / (1+dt) — which is what makes the e^{-t} lower bound exact.

#include <functional>
#include <string>

#include "crime/grid.hpp"
#include "crime/model.hpp"

namespace crime {

struct State {
  double t = 0.0;
  Field u;
  Field v;
};

struct StepControl {
  double dt_init = 1e-3;     // nominal (and maximal) step size
  double dt_min = 1e-10;     // step-failure threshold
  double cfl_safety = 0.9;   // fraction of the positivity limit to use, in (0, 1]
  double v_guard = 0.0;      // degeneracy floor for v; 0 = auto (1e-12 * min v0)
  double t_end = 1.0;
  double output_every = 0.1;

  void validate() const;
};

struct BlowupThresholds {
  double u_sup_max = 1e6;    // ||u||_inf threshold
  double v_w1inf_max = 1e6;  // ||v||_W^{1,inf} threshold (max |v| + |grad v|)
  double v_min = 0.0;        // v-degeneracy threshold; 0 disables
};

enum class BlowupKind { none, u_sup, v_w1inf, v_degeneracy };

struct BlowupStatus {
  BlowupKind kind = BlowupKind::none;
  double value = 0.0;  // monitored quantity at the crossing
  double t = 0.0;      // time of the first accepted state past the threshold
};

BlowupStatus detect_blowup(const State& s, const BlowupThresholds& thr);

struct StepStats {
  long accepted = 0;
  long rejected = 0;
  long clamped = 0;        // structurally zero: the scheme has no clamping path
  long cg_iters = 0;       // total CG iterations over both solves
  double dt_last = 0.0;
  double dt_smallest = 0.0;
};

// Conjugate gradients for A x = b with A = a I - dt_coeff Lap_h (SPD for
// a > 0, dt_coeff >= 0), matrix-free, deterministic reductions. x carries the
// initial guess in and the solution out.
struct CgOutcome {
  bool converged = false;
  int iters = 0;
  double rel_residual = 0.0;
};

CgOutcome cg_solve(double a, double dt_coeff, const Field& b, Field& x, double rel_tol = 1e-10,
                   int max_iters = 10000);

// One-step driver with internal dt control. Deterministic given construction
// arguments and the call sequence.
class Stepper {
 public:
  Stepper(const Parameters& p, const StepControl& ctrl, double v_guard);

  // Advances s by one accepted step of size <= min(dt nominal, positivity
  // limit, t_target - s.t). Throws StepFailure, DegeneracyError, or
  // NumericalError; on return the state time is s.t + dt (exactly t_target if
  // the step landed there).
  State step(const State& s, double t_target);

  double dt_nominal() const { return dt_nominal_; }
  const StepStats& stats() const { return stats_; }

 private:
  bool attempt(const State& s, double dt, State& out, std::string& why);

  Parameters p_;
  StepControl ctrl_;
  double v_guard_;
  double dt_nominal_;
  int streak_ = 0;  // accepted steps since the last dt change
  StepStats stats_;
};

enum class RunOutcome { completed, blowup, step_failure, degeneracy, numerical_failure };

struct RunResult {
  State final_state;
  BlowupStatus status;
  RunOutcome outcome = RunOutcome::completed;
  std::string message;
  StepStats stats;
  double v_guard = 0.0;  // the guard actually in effect
};

// Advances s0 to t_end (or a blow-up/failure), invoking sink at t = 0, at every
// multiple of output_every, at t_end, and at a blow-up crossing. Step errors
// are converted into structured outcomes carrying the last good state.
RunResult run(const State& s0, const Parameters& p, const StepControl& ctrl,
              const BlowupThresholds& thr, const std::function<void(const State&)>& sink);

}  // namespace crime
