#include "crime/stepper.hpp"

#include <cmath>

#include "cell_kernels.hpp"
#include "crime/ops.hpp"
#include "det_reduce.hpp"

namespace crime {

namespace {

using ops::detail::det_fold;

bool all_finite(const Field& f) {
  // Folded through the deterministic reducer for form's sake; finiteness is
  // order-independent anyway.
  const double m = ops::max_abs(f);
  return std::isfinite(m);
}

// max over cells of the explicit outflow rate multiplying u.
double max_sink_rate(const Field& u, const Field& v, const Parameters& p) {
  const Grid& g = u.grid;
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double inv_dy2 = 1.0 / (g.dy() * g.dy());
  return det_fold(
      g.nx, g.ny,
      [&](int i, int j) { return ops::detail::explicit_sink_rate_cell(u, v, i, j, p, inv_dx2, inv_dy2); },
      [](double a, double b) { return b > a ? b : a; }, 0.0);
}

Field apply_helmholtz(double a, double dt_coeff, const Field& x) {
  const Grid& g = x.grid;
  const double inv_dx2 = 1.0 / (g.dx() * g.dx());
  const double inv_dy2 = 1.0 / (g.dy() * g.dy());
  Field out(g);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out(i, j) = a * x(i, j) - dt_coeff * ops::detail::laplacian_cell(x, i, j, inv_dx2, inv_dy2);
  return out;
}

void axpy(Field& y, double alpha, const Field& x) {
  const Grid& g = y.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) y(i, j) += alpha * x(i, j);
}

void xpay(Field& p, const Field& r, double beta) {  // p = r + beta p
  const Grid& g = p.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) p(i, j) = r(i, j) + beta * p(i, j);
}

}  // namespace

CgOutcome cg_solve(double a, double dt_coeff, const Field& b, Field& x, double rel_tol,
                   int max_iters) {
  if (!(a > 0.0) || !(dt_coeff >= 0.0)) throw DomainError("cg_solve: need a > 0, dt_coeff >= 0");
  require_same_grid(b, x, "cg_solve");
  CgOutcome out;
  const double bnorm = std::sqrt(ops::dot(b, b));
  if (bnorm == 0.0) {
    x = Field(b.grid, 0.0);
    out.converged = true;
    return out;
  }
  const double tol_abs = rel_tol * bnorm;
  Field r = apply_helmholtz(a, dt_coeff, x);
  {
    const Grid& g = r.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) r(i, j) = b(i, j) - r(i, j);
  }
  double rr = ops::dot(r, r);
  if (std::sqrt(rr) <= tol_abs) {
    out.converged = true;
    out.rel_residual = std::sqrt(rr) / bnorm;
    return out;
  }
  Field p = r;
  for (int it = 1; it <= max_iters; ++it) {
    const Field ap = apply_helmholtz(a, dt_coeff, p);
    const double pap = ops::dot(p, ap);
    if (!(pap > 0.0)) break;  // loss of positive-definiteness in floating point
    const double alpha = rr / pap;
    axpy(x, alpha, p);
    axpy(r, -alpha, ap);
    const double rr_new = ops::dot(r, r);
    out.iters = it;
    if (std::sqrt(rr_new) <= tol_abs) {
      out.converged = true;
      out.rel_residual = std::sqrt(rr_new) / bnorm;
      return out;
    }
    xpay(p, r, rr_new / rr);
    rr = rr_new;
  }
  out.rel_residual = std::sqrt(rr) / bnorm;
  return out;
}

void StepControl::validate() const {
  if (!(dt_init > 0.0)) throw DomainError("StepControl: dt_init must be > 0");
  if (!(dt_min > 0.0 && dt_min <= dt_init))
    throw DomainError("StepControl: need 0 < dt_min <= dt_init");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0))
    throw DomainError("StepControl: cfl_safety must lie in (0, 1]");
  if (!(v_guard >= 0.0)) throw DomainError("StepControl: v_guard must be >= 0");
  if (!(t_end >= 0.0)) throw DomainError("StepControl: t_end must be >= 0");
  if (!(output_every > 0.0)) throw DomainError("StepControl: output_every must be > 0");
}

BlowupStatus detect_blowup(const State& s, const BlowupThresholds& thr) {
  BlowupStatus st;
  st.t = s.t;
  const double usup = ops::max_abs(s.u);
  if (usup >= thr.u_sup_max) {
    st.kind = BlowupKind::u_sup;
    st.value = usup;
    return st;
  }
  const VectorField gv = ops::gradient_centered(s.v);
  const Grid& g = s.v.grid;
  const double w1inf = det_fold(
      g.nx, g.ny,
      [&](int i, int j) {
        const size_t k = static_cast<size_t>(j) * g.nx + i;
        return std::abs(s.v(i, j)) + std::sqrt(gv.x[k] * gv.x[k] + gv.y[k] * gv.y[k]);
      },
      [](double a, double b) { return b > a ? b : a; }, 0.0);
  if (w1inf >= thr.v_w1inf_max) {
    st.kind = BlowupKind::v_w1inf;
    st.value = w1inf;
    return st;
  }
  if (thr.v_min > 0.0) {
    const double vmin = ops::min_value(s.v);
    if (vmin <= thr.v_min) {
      st.kind = BlowupKind::v_degeneracy;
      st.value = vmin;
      return st;
    }
  }
  return st;
}

Stepper::Stepper(const Parameters& p, const StepControl& ctrl, double v_guard)
    : p_(p), ctrl_(ctrl), v_guard_(v_guard), dt_nominal_(ctrl.dt_init) {
  ctrl_.validate();
  stats_.dt_smallest = ctrl.dt_init;
}

bool Stepper::attempt(const State& s, double dt, State& out, std::string& why) {
  const Grid& g = s.u.grid;

  // Explicit stage. The taxis divergence recomputes face fluxes cell by cell;
  // both adjacent cells evaluate the identical expression, so the discrete
  // divergence integrates to rounding noise and mass bookkeeping is exact.
  const Field div_q = ops::taxis_divergence(s.u, s.v, p_);
  Field ustar(g);
  Field vstar(g);
  const bool couple = p_.uv_coupling;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double u = s.u(i, j);
      const double v = s.v(i, j);
      ustar(i, j) = u + dt * (-div_q(i, j) + reaction_u(u, v, p_));
      vstar(i, j) = v + dt * (couple ? u * v : 0.0);
    }

  if (!all_finite(ustar) || !all_finite(vstar)) {
    why = "non-finite explicit stage";
    return false;
  }
  if (ops::min_value(ustar) < 0.0) {
    why = "negative u after explicit stage";
    return false;
  }

  // Implicit diffusion. Initial guesses b and b/(1+dt) make the solves exact
  // (zero iterations) on constant states.
  out.u = ustar;
  const CgOutcome cu = cg_solve(1.0, dt, ustar, out.u);
  stats_.cg_iters += cu.iters;
  if (!cu.converged) {
    why = "u-solve did not reach tolerance";
    return false;
  }
  const double shift = 1.0 + dt;
  out.v = vstar;
  {
    const Grid& gg = out.v.grid;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < gg.ny; ++j)
      for (int i = 0; i < gg.nx; ++i) out.v(i, j) = vstar(i, j) / shift;
  }
  const CgOutcome cv = cg_solve(shift, dt, vstar, out.v);
  stats_.cg_iters += cv.iters;
  if (!cv.converged) {
    why = "v-solve did not reach tolerance";
    return false;
  }

  if (!all_finite(out.u) || !all_finite(out.v)) {
    why = "non-finite implicit stage";
    return false;
  }
  if (ops::min_value(out.u) < 0.0) {
    why = "negative u after implicit stage";
    return false;
  }
  if (ops::min_value(out.v) <= v_guard_) {
    why = "v fell to the degeneracy guard";
    throw DegeneracyError("step: v reached the degeneracy guard " + std::to_string(v_guard_) +
                          " at t = " + std::to_string(s.t + dt));
  }
  out.t = s.t + dt;
  return true;
}

State Stepper::step(const State& s, double t_target) {
  if (!(t_target > s.t)) throw UsageError("Stepper::step: t_target must exceed current time");

  // Positivity restriction from the current state.
  const double rate = max_sink_rate(s.u, s.v, p_);
  const double dt_stable = rate > 0.0 ? ctrl_.cfl_safety / rate : ctrl_.dt_init;

  while (true) {
    double dt = std::min(dt_nominal_, dt_stable);
    bool lands = false;
    const double remaining = t_target - s.t;
    if (remaining <= dt * (1.0 + 1e-9)) {
      dt = remaining;
      lands = true;
    } else if (remaining < 2.0 * dt) {
      dt = 0.5 * remaining;  // split the tail evenly so the next step lands exactly
    }
    if (dt < ctrl_.dt_min)
      throw StepFailure("step: dt underflowed dt_min at t = " + std::to_string(s.t) +
                        " (dt = " + std::to_string(dt) + ")");

    State out;
    std::string why;
    if (attempt(s, dt, out, why)) {
      if (lands) out.t = t_target;  // absorb the last-ulp accumulation error
      ++stats_.accepted;
      stats_.dt_last = dt;
      if (dt < stats_.dt_smallest) stats_.dt_smallest = dt;
      if (++streak_ >= 10 && dt_nominal_ < ctrl_.dt_init) {
        dt_nominal_ = std::min(dt_nominal_ * 1.2, ctrl_.dt_init);
        streak_ = 0;
      }
      return out;
    }

    ++stats_.rejected;
    streak_ = 0;
    const double dt_halved = 0.5 * dt;
    if (dt_halved < ctrl_.dt_min)
      throw StepFailure("step: rejected (" + why + ") and dt would underflow dt_min at t = " +
                        std::to_string(s.t));
    dt_nominal_ = dt_halved;
  }
}

RunResult run(const State& s0, const Parameters& p, const StepControl& ctrl,
              const BlowupThresholds& thr, const std::function<void(const State&)>& sink) {
  ctrl.validate();
  require_same_grid(s0.u, s0.v, "run");
  RunResult res;
  if (!all_finite(s0.u) || !all_finite(s0.v)) {
    res.final_state = s0;
    res.outcome = RunOutcome::numerical_failure;
    res.message = "initial state contains non-finite values";
    return res;
  }
  const double v0_min = ops::min_value(s0.v);
  if (!(v0_min > 0.0)) {
    res.final_state = s0;
    res.outcome = RunOutcome::numerical_failure;
    res.message = "initial v is not strictly positive";
    return res;
  }
  res.v_guard = ctrl.v_guard > 0.0 ? ctrl.v_guard : 1e-12 * v0_min;

  State s = s0;
  if (sink) sink(s);
  res.status = detect_blowup(s, thr);
  if (res.status.kind != BlowupKind::none) {
    res.final_state = s;
    res.outcome = RunOutcome::blowup;
    return res;
  }
  if (ctrl.t_end <= s0.t) {
    res.final_state = s;
    return res;
  }

  Stepper stepper(p, ctrl, res.v_guard);
  long k_out = static_cast<long>(std::floor(s0.t / ctrl.output_every + 1e-9));
  try {
    while (s.t < ctrl.t_end) {
      double boundary = (k_out + 1) * ctrl.output_every;
      if (boundary <= s.t * (1.0 + 1e-15)) {  // s0.t sat exactly on a boundary
        ++k_out;
        boundary = (k_out + 1) * ctrl.output_every;
      }
      const double target = std::min(boundary, ctrl.t_end);
      s = stepper.step(s, target);
      if (s.t == target) {
        if (sink) sink(s);
        if (target == boundary) ++k_out;
      }
      res.status = detect_blowup(s, thr);
      if (res.status.kind != BlowupKind::none) {
        if (s.t != target && sink) sink(s);  // record the crossing state
        res.outcome = RunOutcome::blowup;
        break;
      }
    }
  } catch (const StepFailure& e) {
    res.outcome = RunOutcome::step_failure;
    res.message = e.what();
  } catch (const DegeneracyError& e) {
    res.outcome = RunOutcome::degeneracy;
    res.message = e.what();
  } catch (const NumericalError& e) {
    res.outcome = RunOutcome::numerical_failure;
    res.message = e.what();
  }
  res.final_state = s;
  res.stats = stepper.stats();
  return res;
}

}  // namespace crime
