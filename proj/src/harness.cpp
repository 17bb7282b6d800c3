#include "crime/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "crime/ops.hpp"

namespace crime {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Portable uniform in [0,1): top 53 bits of the generator output. Fixed
// mapping (not uniform_real_distribution) so seeds reproduce across standard
// library implementations.
double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1p-53; }

void validate_initial(const State& s, const char* kind) {
  for (double x : s.u.data)
    if (!std::isfinite(x) || x < 0.0)
      throw DomainError(std::string("make_initial(") + kind + "): u0 must be finite and >= 0");
  for (double x : s.v.data)
    if (!std::isfinite(x) || x <= 0.0)
      throw DomainError(std::string("make_initial(") + kind + "): v0 must be finite and > 0");
}

}  // namespace

State make_initial(const IcSpec& ic, const Grid& grid, const Parameters& p) {
  State s;
  s.t = 0.0;
  s.u = Field(grid);
  s.v = Field(grid);
  const char* kind = "";
  switch (ic.kind) {
    case IcKind::constant:
      kind = "constant";
      std::fill(s.u.data.begin(), s.u.data.end(), ic.u0);
      std::fill(s.v.data.begin(), s.v.data.end(), ic.v0);
      break;
    case IcKind::fixed_point: {
      kind = "fixed_point";
      const auto fp = homogeneous_fixed_point(p);
      if (!fp) throw DomainError("make_initial(fixed_point): requires rho > mu");
      std::fill(s.u.data.begin(), s.u.data.end(), fp->u);
      std::fill(s.v.data.begin(), s.v.data.end(), fp->v);
      break;
    }
    case IcKind::gaussian_bump: {
      kind = "gaussian_bump";
      if (!(ic.u_width > 0.0) || !(ic.v_width > 0.0))
        throw DomainError("make_initial(gaussian_bump): widths must be > 0");
      // Centers and widths are absolute domain coordinates / lengths.
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          const double x = grid.x(i), y = grid.y(j);
          const double ru2 = (x - ic.u_cx) * (x - ic.u_cx) + (y - ic.u_cy) * (y - ic.u_cy);
          const double rv2 = (x - ic.v_cx) * (x - ic.v_cx) + (y - ic.v_cy) * (y - ic.v_cy);
          s.u(i, j) = ic.u_floor + ic.u_amp * std::exp(-ru2 / (ic.u_width * ic.u_width));
          s.v(i, j) = ic.v_floor + ic.v_amp * std::exp(-rv2 / (ic.v_width * ic.v_width));
        }
      break;
    }
    case IcKind::perturbed_homogeneous: {
      kind = "perturbed_homogeneous";
      const auto fp = homogeneous_fixed_point(p);
      if (!fp) throw DomainError("make_initial(perturbed_homogeneous): requires rho > mu");
      for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
          const double m =
              1.0 + ic.perturb * std::cos(kPi * grid.x(i) / grid.lx) * std::cos(kPi * grid.y(j) / grid.ly);
          s.u(i, j) = fp->u * m;
          s.v(i, j) = fp->v * m;
        }
      break;
    }
    case IcKind::seeded_random: {
      kind = "seeded_random";
      std::mt19937_64 gen(ic.seed);
      // Draw order is pinned: all u cells row-major, then all v cells.
      for (double& x : s.u.data) x = ic.u_floor + ic.u_amp * uniform01(gen);
      for (double& x : s.v.data) x = ic.v_floor + ic.v_amp * uniform01(gen);
      break;
    }
  }
  validate_initial(s, kind);
  return s;
}

SimOutput simulate(const RunConfig& cfg, bool keep_states) {
  cfg.params.validate();
  cfg.ctrl.validate();
  cfg.diag.validate();
  State s0 = make_initial(cfg.ic, cfg.grid, cfg.params);

  SimOutput out;
  out.v0_min = ops::min_value(s0.v);
  out.dt_nominal = cfg.ctrl.dt_init;
  out.h = std::max(cfg.grid.dx(), cfg.grid.dy());
  const double mass0 = ops::integrate(s0.u) + ops::integrate(s0.v);
  out.bc = bound_constants(cfg.params, cfg.grid.area(), mass0);

  auto sink = [&](const State& s) {
    const DiagnosticsRecord* prev = out.records.empty() ? nullptr : &out.records.back();
    out.records.push_back(compute_record(s, cfg.params, cfg.diag, prev));
    if (keep_states) out.states.push_back(s);
  };
  out.result = run(s0, cfg.params, cfg.ctrl, cfg.thresholds, sink);
  return out;
}

std::vector<Verdict> run_verdicts(const SimOutput& sim, const Parameters& p) {
  std::vector<Verdict> out;
  out.push_back(check_l1_bound(sim.records, sim.bc, sim.dt_nominal, sim.h));
  out.push_back(check_u2_time_integral(sim.records, sim.bc, sim.dt_nominal, sim.h));
  if (p.gamma > 0.0)
    out.push_back(check_u2g_time_integral(sim.records, sim.bc, sim.dt_nominal, sim.h));
  out.push_back(check_v_lower_bound(sim.records, sim.v0_min));
  return out;
}

namespace {

// Rectangle-rule space-time distances between two trajectories stored on the
// same record lattice (left endpoints; the final record carries zero weight).
void space_time_distances(const std::vector<State>& hi, const std::vector<State>& lo,
                          SweepRow& row) {
  if (hi.size() != lo.size())
    throw UsageError("eps_sweep: trajectories disagree on the record lattice");
  double s_lnu = 0.0, s_v = 0.0, s_gv = 0.0, s_ulp = 0.0;
  for (size_t k = 0; k + 1 < hi.size(); ++k) {
    if (std::abs(hi[k].t - lo[k].t) > 1e-9)
      throw UsageError("eps_sweep: trajectories disagree on the record lattice");
    const Grid& g = hi[k].u.grid;
    require_same_grid(hi[k].u, lo[k].u, "eps_sweep");
    const VectorField gh = ops::gradient_centered(hi[k].v);
    const VectorField gl = ops::gradient_centered(lo[k].v);
    double lnu = 0.0, vv = 0.0, gv = 0.0, ulp = 0.0;
    const int n = g.size();
    for (int idx = 0; idx < n; ++idx) {
      const double dlnu = std::log1p(lo[k].u.data[idx]) - std::log1p(hi[k].u.data[idx]);
      const double du = lo[k].u.data[idx] - hi[k].u.data[idx];
      const double dv = lo[k].v.data[idx] - hi[k].v.data[idx];
      const double dgx = gl.x[idx] - gh.x[idx];
      const double dgy = gl.y[idx] - gh.y[idx];
      lnu += dlnu * dlnu;
      vv += dv * dv;
      gv += dgx * dgx + dgy * dgy;
      ulp += std::sqrt(std::abs(du)) * std::abs(du);  // |du|^{3/2}
    }
    const double w = (hi[k + 1].t - hi[k].t) * g.cell_area();
    s_lnu += w * lnu;
    s_v += w * vv;
    s_gv += w * gv;
    s_ulp += w * ulp;
  }
  row.d_lnu = std::sqrt(s_lnu);
  row.d_v = std::sqrt(s_v);
  row.d_gradv = std::sqrt(s_gv);
  row.d_u_lp = std::pow(s_ulp, 2.0 / 3.0);
}

}  // namespace

SweepReport eps_sweep(const RunConfig& cfg, const std::vector<double>& ladder, double T) {
  if (!(T > 0.0)) throw UsageError("eps_sweep: T must be > 0");
  if (ladder.size() < 2) throw UsageError("eps_sweep: ladder needs at least 2 entries");
  for (size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0 && ladder[i] <= 1.0))
      throw UsageError("eps_sweep: ladder entries must lie in (0, 1]");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw UsageError("eps_sweep: ladder must be strictly decreasing");
  }

  SweepReport rep;
  rep.ladder = ladder;
  std::vector<State> prev_states;
  bool prev_ok = false;
  double last_dv = std::numeric_limits<double>::infinity();
  double last_dgv = std::numeric_limits<double>::infinity();
  for (size_t r = 0; r < ladder.size(); ++r) {
    RunConfig c = cfg;
    c.params.eps = ladder[r];
    c.ctrl.t_end = T;
    SimOutput sim = simulate(c, /*keep_states=*/true);
    const bool ok = sim.result.outcome == RunOutcome::completed;
    rep.run_ok.push_back(ok);
    double sup_u = 0.0;
    for (const auto& rec : sim.records) sup_u = std::max(sup_u, rec.linf_u);
    rep.sup_linf_u.push_back(sup_u);

    if (r > 0) {
      SweepRow row;
      row.eps_hi = ladder[r - 1];
      row.eps_lo = ladder[r];
      if (prev_ok && ok) {
        space_time_distances(prev_states, sim.states, row);
        row.valid = true;
        if (row.d_v > last_dv) rep.monotone_v = false;
        if (row.d_gradv > last_dgv) rep.monotone_gradv = false;
        last_dv = row.d_v;
        last_dgv = row.d_gradv;
        if (row.d_lnu != 0.0 || row.d_v != 0.0 || row.d_gradv != 0.0 || row.d_u_lp != 0.0)
          rep.all_zero = false;
      }
      rep.rows.push_back(row);
    }
    prev_states = std::move(sim.states);
    prev_ok = ok;
  }
  return rep;
}

io::CsvTable sweep_to_csv(const SweepReport& rep) {
  io::CsvTable t;
  t.columns = {"eps_hi", "eps_lo", "d_lnu", "d_v", "d_gradv", "d_u_lp"};
  for (const auto& row : rep.rows) {
    if (!row.valid) continue;  // failed rungs drop their pairs
    t.rows.push_back({row.eps_hi, row.eps_lo, row.d_lnu, row.d_v, row.d_gradv, row.d_u_lp});
  }
  return t;
}

GammaCompareReport gamma_compare(const RunConfig& cfg, const std::vector<double>& gammas,
                                 const std::vector<double>& horizons) {
  if (gammas.empty()) throw UsageError("gamma_compare: need at least one gamma");
  for (double g : gammas)
    if (!(g >= 0.0)) throw UsageError("gamma_compare: gammas must be >= 0");
  if (horizons.empty()) throw UsageError("gamma_compare: need at least one horizon");
  for (size_t i = 0; i < horizons.size(); ++i) {
    if (!(horizons[i] > 0.0)) throw UsageError("gamma_compare: horizons must be > 0");
    if (i > 0 && !(horizons[i] > horizons[i - 1]))
      throw UsageError("gamma_compare: horizons must be strictly increasing");
  }

  GammaCompareReport rep;
  rep.gammas = gammas;
  for (double gamma : gammas) {
    RunConfig c = cfg;
    c.params.gamma = gamma;
    c.ctrl.t_end = horizons.back();
    SimOutput sim = simulate(c, /*keep_states=*/false);
    const bool ok = sim.result.outcome == RunOutcome::completed;

    // One run per gamma; horizon rows are prefix suprema over its records.
    double su = 0.0, sv = 0.0;
    size_t idx = 0;
    std::vector<GammaRow> rows_here;
    for (double T : horizons) {
      while (idx < sim.records.size() && sim.records[idx].t <= T + 1e-9) {
        su = std::max(su, sim.records[idx].linf_u);
        sv = std::max(sv, sim.records[idx].linf_v);
        ++idx;
      }
      rows_here.push_back({gamma, T, su, sv, ok});
    }

    double umin = rows_here.front().sup_linf_u, umax = umin;
    double vmin = rows_here.front().sup_linf_v, vmax = vmin;
    for (const auto& row : rows_here) {
      umin = std::min(umin, row.sup_linf_u);
      umax = std::max(umax, row.sup_linf_u);
      vmin = std::min(vmin, row.sup_linf_v);
      vmax = std::max(vmax, row.sup_linf_v);
    }
    const bool stab = ok && (umax - umin) <= 0.01 * umax && (vmax - vmin) <= 0.01 * vmax;
    rep.stabilized.push_back(stab);
    rep.gamma_ok.push_back(ok);
    rep.rows.insert(rep.rows.end(), rows_here.begin(), rows_here.end());
  }
  return rep;
}

io::CsvTable gamma_compare_to_csv(const GammaCompareReport& rep) {
  io::CsvTable t;
  t.columns = {"gamma", "T", "sup_linf_u", "sup_linf_v", "run_ok", "stabilized"};
  const size_t per = rep.rows.size() / std::max<size_t>(1, rep.gammas.size());
  for (size_t r = 0; r < rep.rows.size(); ++r) {
    const auto& row = rep.rows[r];
    const size_t gi = per ? r / per : 0;
    // stabilized: 1/0 verdict for gamma > 0; -1 marks the gamma = 0 rows,
    // which are reported without a verdict.
    const double stab = row.gamma > 0.0 ? (rep.stabilized[gi] ? 1.0 : 0.0) : -1.0;
    t.rows.push_back(
        {row.gamma, row.T, row.sup_linf_u, row.sup_linf_v, row.ok ? 1.0 : 0.0, stab});
  }
  return t;
}

double heat_oracle_error(const Grid& grid, double dt, double t_end) {
  if (!(dt > 0.0)) throw UsageError("heat_oracle_error: dt must be > 0");
  if (!(t_end >= 0.0)) throw UsageError("heat_oracle_error: t_end must be >= 0");

  // Oracle parameters: pure heat flow for u. Built directly (not via config,
  // which enforces mu > 0 and chi > 0 for the real model).
  Parameters p;
  p.rho = 0.0;
  p.mu = 0.0;
  p.chi = 0.0;
  p.gamma = 0.0;
  p.eps = 0.0;
  p.uv_coupling = false;

  const double lam = kPi * kPi * (1.0 / (grid.lx * grid.lx) + 1.0 / (grid.ly * grid.ly));
  auto exact = [&](double x, double y, double t) {
    return 1.0 + 0.5 * std::exp(-lam * t) * std::cos(kPi * x / grid.lx) * std::cos(kPi * y / grid.ly);
  };

  State s0;
  s0.t = 0.0;
  s0.u = Field(grid);
  s0.v = Field(grid, 1.0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) s0.u(i, j) = exact(grid.x(i), grid.y(j), 0.0);

  StepControl ctrl;
  ctrl.dt_init = dt;
  ctrl.dt_min = std::min(1e-10, dt);
  ctrl.t_end = t_end;
  ctrl.output_every = t_end > 0.0 ? t_end / 25.0 : 1.0;

  std::vector<double> times;
  std::vector<double> sq;  // int (u - exact)^2 at each record time
  auto sink = [&](const State& s) {
    double acc = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const double d = s.u(i, j) - exact(grid.x(i), grid.y(j), s.t);
        acc += d * d;
      }
    times.push_back(s.t);
    sq.push_back(acc * grid.cell_area());
  };
  const RunResult res = run(s0, p, ctrl, BlowupThresholds{}, sink);
  if (res.outcome != RunOutcome::completed)
    throw NumericalError("heat_oracle_error: run failed: " + res.message);

  double err2 = 0.0;
  for (size_t k = 0; k + 1 < times.size(); ++k) err2 += (times[k + 1] - times[k]) * sq[k];
  return std::sqrt(err2);
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw UsageError("fit_loglog_slope: need two same-length samples");
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw UsageError("fit_loglog_slope: samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw UsageError("fit_loglog_slope: degenerate abscissae");
  return sxy / sxx;
}

}  // namespace crime
