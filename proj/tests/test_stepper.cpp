#include "doctest.h"

#include <cmath>
#include <vector>

#include "crime/ops.hpp"
#include "crime/stepper.hpp"

using namespace crime;

namespace {

Parameters params(double rho, double mu, double chi, double gamma = 0.0, double eps = 0.1) {
  Parameters p;
  p.rho = rho;
  p.mu = mu;
  p.chi = chi;
  p.gamma = gamma;
  p.eps = eps;
  return p;
}

State const_state(const Grid& g, double u0, double v0) {
  State s;
  s.u = Field(g, u0);
  s.v = Field(g, v0);
  return s;
}

}  // namespace

TEST_CASE("step control validation") {
  StepControl c;
  CHECK_NOTHROW(c.validate());
  StepControl bad = c;
  bad.dt_init = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.dt_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.cfl_safety = 1.5;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.cfl_safety = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.t_end = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = c;
  bad.output_every = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("cg solves the shifted Poisson system to tight residuals") {
  const Grid g = Grid::uniform(16, 16, 1.0, 1.0);

  SUBCASE("constant right-hand side is exact with zero iterations") {
    const Field b(g, 3.0);
    Field x(g);
    // guess the exact answer: constants are in the kernel of Lap_h
    for (double& xv : x.data) xv = 3.0 / 1.25;
    const CgOutcome out = cg_solve(1.25, 2e-3, b, x, 1e-10);
    CHECK(out.converged);
    CHECK(out.iters == 0);
    for (double xv : x.data) CHECK(xv == 3.0 / 1.25);
  }

  SUBCASE("zero right-hand side gives the zero solution") {
    const Field b(g, 0.0);
    Field x(g, 17.0);  // arbitrary guess must be discarded
    const CgOutcome out = cg_solve(1.0, 1e-3, b, x);
    CHECK(out.converged);
    for (double xv : x.data) CHECK(xv == 0.0);
  }

  SUBCASE("generic right-hand side: verify A x = b by applying A") {
    Field b(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) b(i, j) = std::sin(3.0 * g.x(i)) + g.y(j);
    Field x = b;
    const double a = 1.0 + 5e-3, dt = 5e-3;
    const CgOutcome out = cg_solve(a, dt, b, x, 1e-12);
    CHECK(out.converged);
    CHECK(out.iters > 0);
    const Field lx = ops::laplacian_neumann(x);
    double worst = 0.0;
    for (size_t k = 0; k < x.data.size(); ++k)
      worst = std::max(worst, std::abs(a * x.data[k] - dt * lx.data[k] - b.data[k]));
    CHECK(worst <= 1e-11 * ops::max_abs(b));
  }
}

TEST_CASE("homogeneous fixed point persists to rounding") {
  const Grid g = Grid::uniform(16, 16, 1.0, 1.0);
  const Parameters p = params(2.0, 1.0, 2.0);  // fixed point (1, 1)
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.t_end = 0.2;
  ctrl.output_every = 0.1;
  const RunResult r = run(const_state(g, 1.0, 1.0), p, ctrl, BlowupThresholds{}, {});
  CHECK(r.outcome == RunOutcome::completed);
  CHECK(r.final_state.t == 0.2);
  // constants are exact for every stage: taxis fluxes vanish, the reactions
  // cancel to 0.0, and both CG guesses already solve their systems
  for (double uu : r.final_state.u.data) CHECK(uu == 1.0);
  for (double vv : r.final_state.v.data) CHECK(vv == 1.0);
  CHECK(r.stats.cg_iters == 0);
  CHECK(r.stats.rejected == 0);
}

TEST_CASE("pure decay run reproduces the discrete (1+dt)^-n profile exactly") {
  // u = 0 kills the v source, so each step divides v by exactly (1+dt): the
  // implicit solve sees a constant field, on which CG is exact with 0 iters.
  // dt and the output lattice are dyadic, so all 128 steps have equal size.
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  Parameters p = params(0.5, 1.0, 2.0);
  const double dt = 0.0078125;  // 1/128
  StepControl ctrl;
  ctrl.dt_init = dt;
  ctrl.t_end = 1.0;
  ctrl.output_every = 0.25;
  const RunResult r = run(const_state(g, 0.0, 1.0), p, ctrl, BlowupThresholds{}, {});
  CHECK(r.outcome == RunOutcome::completed);
  CHECK(r.stats.accepted == 128);
  double expect = 1.0;
  for (long k = 0; k < r.stats.accepted; ++k) expect /= 1.0 + dt;
  for (double vv : r.final_state.v.data) CHECK(vv == expect);
  for (double uu : r.final_state.u.data) CHECK(uu == 0.0);
  // discrete decay dominates the continuous one
  CHECK(expect >= std::exp(-1.0));
  CHECK(r.stats.cg_iters == 0);  // constant fields: every solve exact at the guess
  CHECK(r.stats.rejected == 0);
  CHECK(r.stats.clamped == 0);
}

TEST_CASE("blow-up detection") {
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  BlowupThresholds thr;
  thr.u_sup_max = 100.0;
  thr.v_w1inf_max = 1e6;
  thr.v_min = 0.25;

  State s = const_state(g, 1.0, 1.0);
  CHECK(detect_blowup(s, thr).kind == BlowupKind::none);

  s.u(3, 3) = 1e9;
  const BlowupStatus bu = detect_blowup(s, thr);
  CHECK(bu.kind == BlowupKind::u_sup);
  CHECK(bu.value == 1e9);

  s = const_state(g, 1.0, 1.0);
  s.v(2, 2) = 0.2;
  CHECK(detect_blowup(s, thr).kind == BlowupKind::v_degeneracy);

  s = const_state(g, 1.0, 2e6);
  CHECK(detect_blowup(s, thr).kind == BlowupKind::v_w1inf);
}

TEST_CASE("decay run crosses a v-degeneracy threshold near ln 2") {
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  Parameters p = params(0.0, 1.0, 1.0);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.t_end = 5.0;
  ctrl.output_every = 1.0;
  BlowupThresholds thr;
  thr.v_min = 0.5;
  const RunResult r = run(const_state(g, 0.0, 1.0), p, ctrl, thr, {});
  CHECK(r.outcome == RunOutcome::blowup);
  CHECK(r.status.kind == BlowupKind::v_degeneracy);
  // (1+dt)^-n model: crossing within one step of ln 2 (plus first-order bias)
  CHECK(r.status.t == doctest::Approx(std::log(2.0)).epsilon(0.01));
  CHECK(r.final_state.t == r.status.t);
}

TEST_CASE("zero-length and degenerate runs") {
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  StepControl ctrl;
  ctrl.t_end = 0.0;
  std::vector<double> sink_times;
  const RunResult r = run(const_state(g, 1.0, 1.0), params(2, 1, 2), ctrl, BlowupThresholds{},
                          [&](const State& s) { sink_times.push_back(s.t); });
  CHECK(r.outcome == RunOutcome::completed);
  CHECK(r.final_state.t == 0.0);
  REQUIRE(sink_times.size() == 1);  // exactly the initial record
  CHECK(sink_times[0] == 0.0);

  // nonpositive initial v is a structured failure, not an exception
  const RunResult r2 =
      run(const_state(g, 1.0, 0.0), params(2, 1, 2), ctrl, BlowupThresholds{}, {});
  CHECK(r2.outcome == RunOutcome::numerical_failure);

  Stepper st(params(2, 1, 2), StepControl{}, 1e-12);
  State s = const_state(g, 1.0, 1.0);
  s.t = 0.5;
  CHECK_THROWS_AS(st.step(s, 0.5), UsageError);
}

TEST_CASE("positivity restriction throttles dt instead of clamping") {
  // enormous chi on a steep v makes the explicit outflow rate huge; the run
  // must either proceed with tiny accepted steps or fail structurally, but
  // never clamp a negative value away.
  const Grid g = Grid::uniform(16, 16, 1.0, 1.0);
  Parameters p = params(0.0, 1.0, 1e3);
  p.eps = 0.0;
  State s0 = const_state(g, 1.0, 1.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) s0.v(i, j) = 0.5 + 4.0 * g.x(i);
  StepControl ctrl;
  ctrl.dt_init = 1e-2;
  ctrl.t_end = 5e-3;
  ctrl.output_every = 5e-3;
  const RunResult r = run(s0, p, ctrl, BlowupThresholds{}, {});
  CHECK(r.outcome == RunOutcome::completed);
  CHECK(r.stats.clamped == 0);
  CHECK(r.stats.dt_smallest < 1e-4);  // the cap actually bit
  CHECK(ops::min_value(r.final_state.u) >= 0.0);

  // with dt_min above the positivity limit the same setup is a step failure
  StepControl hard = ctrl;
  hard.dt_min = 1e-3;
  const RunResult rf = run(s0, p, hard, BlowupThresholds{}, {});
  CHECK(rf.outcome == RunOutcome::step_failure);
  CHECK(rf.message.size() > 0);
  CHECK(rf.final_state.t < hard.t_end);
}

TEST_CASE("sink fires on the output lattice") {
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.t_end = 0.35;
  ctrl.output_every = 0.1;
  std::vector<double> times;
  const RunResult r = run(const_state(g, 1.0, 1.0), params(2, 1, 2), ctrl, BlowupThresholds{},
                          [&](const State& s) { times.push_back(s.t); });
  CHECK(r.outcome == RunOutcome::completed);
  REQUIRE(times.size() == 5);
  CHECK(times[0] == 0.0);
  CHECK(times[1] == 0.1);
  CHECK(times[2] == 0.2);
  CHECK(times[3] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(times[4] == 0.35);
  CHECK(r.final_state.t == 0.35);
}
