#include "crime/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crime/ops.hpp"
#include "det_reduce.hpp"

namespace crime {

using ops::detail::det_sum;

void DiagSpec::validate() const {
  if (p_set.empty()) throw DomainError("DiagSpec: p_set must not be empty");
  for (double p : p_set)
    if (!(p >= 1.0)) throw DomainError("DiagSpec: every p must be >= 1");
  if (!(q >= 0.0)) throw DomainError("DiagSpec: q must be >= 0 (0 = auto)");
}

DiagnosticsRecord compute_record(const State& s, const Parameters& p, const DiagSpec& spec,
                                 const DiagnosticsRecord* prev) {
  spec.validate();
  require_same_grid(s.u, s.v, "compute_record");
  const Grid& g = s.u.grid;
  const double area = g.cell_area();

  DiagnosticsRecord r;
  r.t = s.t;
  r.mass_u = ops::integrate(s.u);
  r.mass_v = ops::integrate(s.v);
  r.linf_u = ops::max_abs(s.u);
  r.linf_v = ops::max_abs(s.v);
  r.min_v = ops::min_value(s.v);
  for (double pe : spec.p_set) r.lp_v.push_back(ops::lp_norm(s.v, pe));

  const VectorField gv = ops::gradient_centered(s.v);
  Field grad_v_mag(g);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const size_t k = static_cast<size_t>(j) * g.nx + i;
      grad_v_mag(i, j) = std::sqrt(gv.x[k] * gv.x[k] + gv.y[k] * gv.y[k]);
    }
  r.grad_v_lq = ops::lp_norm(grad_v_mag, spec.resolved_q(p.gamma));

  r.int_u2 = det_sum(g.nx, g.ny, [&](int i, int j) { return s.u(i, j) * s.u(i, j); }) * area;
  r.int_u2g = p.gamma == 0.0
                  ? r.int_u2
                  : det_sum(g.nx, g.ny, [&](int i, int j) { return pow2g(s.u(i, j), p.gamma); }) * area;
  r.int_uv = det_sum(g.nx, g.ny, [&](int i, int j) { return s.u(i, j) * s.v(i, j); }) * area;

  const VectorField gu = ops::gradient_centered(s.u);
  r.int_grad_ln_u = det_sum(g.nx, g.ny,
                            [&](int i, int j) {
                              const size_t k = static_cast<size_t>(j) * g.nx + i;
                              const double d = s.u(i, j) + 1.0;
                              return (gu.x[k] * gu.x[k] + gu.y[k] * gu.y[k]) / (d * d);
                            }) *
                    area;
  for (double pe : spec.p_set) r.int_grad_vp2.push_back(ops::grad_power_integral(s.v, pe));

  if (prev) {
    if (!(s.t >= prev->t)) throw UsageError("compute_record: records must advance in time");
    if (prev->lp_v.size() != spec.p_set.size())
      throw UsageError("compute_record: previous record used a different p_set");
    const double dt = s.t - prev->t;
    r.cum_u = prev->cum_u + dt * prev->mass_u;
    r.cum_uv = prev->cum_uv + dt * prev->int_uv;
    r.cum_u2 = prev->cum_u2 + dt * prev->int_u2;
    r.cum_u2g = prev->cum_u2g + dt * prev->int_u2g;
    r.cum_grad_ln_u = prev->cum_grad_ln_u + dt * prev->int_grad_ln_u;
    for (size_t q = 0; q < spec.p_set.size(); ++q)
      r.cum_grad_vp2.push_back(prev->cum_grad_vp2[q] + dt * prev->int_grad_vp2[q]);
  } else {
    r.cum_grad_vp2.assign(spec.p_set.size(), 0.0);
  }
  return r;
}

io::CsvTable records_to_csv(const std::vector<DiagnosticsRecord>& recs, const DiagSpec& spec) {
  io::CsvTable t;
  t.columns = {"t", "mass_u", "mass_v", "linf_u", "linf_v", "min_v"};
  for (double p : spec.p_set) t.columns.push_back("lp_v_" + io::format_double(p));
  t.columns.push_back("grad_v_lq");
  for (const char* c : {"int_u2", "int_u2g", "int_uv", "int_grad_ln_u"}) t.columns.push_back(c);
  for (double p : spec.p_set) t.columns.push_back("int_grad_vp2_" + io::format_double(p));
  for (const char* c : {"cum_u", "cum_uv", "cum_u2", "cum_u2g", "cum_grad_ln_u"})
    t.columns.push_back(c);
  for (double p : spec.p_set) t.columns.push_back("cum_grad_vp2_" + io::format_double(p));

  for (const auto& r : recs) {
    if (r.lp_v.size() != spec.p_set.size())
      throw UsageError("records_to_csv: record p_set width mismatch");
    std::vector<double> row = {r.t, r.mass_u, r.mass_v, r.linf_u, r.linf_v, r.min_v};
    row.insert(row.end(), r.lp_v.begin(), r.lp_v.end());
    row.push_back(r.grad_v_lq);
    row.insert(row.end(), {r.int_u2, r.int_u2g, r.int_uv, r.int_grad_ln_u});
    row.insert(row.end(), r.int_grad_vp2.begin(), r.int_grad_vp2.end());
    row.insert(row.end(), {r.cum_u, r.cum_uv, r.cum_u2, r.cum_u2g, r.cum_grad_ln_u});
    row.insert(row.end(), r.cum_grad_vp2.begin(), r.cum_grad_vp2.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::pair<std::vector<DiagnosticsRecord>, DiagSpec> records_from_csv(const io::CsvTable& table) {
  DiagSpec spec;
  spec.p_set.clear();
  const std::string lp_prefix = "lp_v_";
  for (const auto& c : table.columns)
    if (c.rfind(lp_prefix, 0) == 0)
      spec.p_set.push_back(io::parse_double(c.substr(lp_prefix.size()), "records_from_csv p_set"));
  if (spec.p_set.empty()) throw ConfigError("records_from_csv: no lp_v_* columns found");

  auto col = [&](const std::string& name) {
    for (size_t c = 0; c < table.columns.size(); ++c)
      if (table.columns[c] == name) return c;
    throw ConfigError("records_from_csv: missing column '" + name + "'");
  };

  std::vector<DiagnosticsRecord> recs;
  for (const auto& row : table.rows) {
    DiagnosticsRecord r;
    r.t = row[col("t")];
    r.mass_u = row[col("mass_u")];
    r.mass_v = row[col("mass_v")];
    r.linf_u = row[col("linf_u")];
    r.linf_v = row[col("linf_v")];
    r.min_v = row[col("min_v")];
    for (double p : spec.p_set) r.lp_v.push_back(row[col("lp_v_" + io::format_double(p))]);
    r.grad_v_lq = row[col("grad_v_lq")];
    r.int_u2 = row[col("int_u2")];
    r.int_u2g = row[col("int_u2g")];
    r.int_uv = row[col("int_uv")];
    r.int_grad_ln_u = row[col("int_grad_ln_u")];
    for (double p : spec.p_set)
      r.int_grad_vp2.push_back(row[col("int_grad_vp2_" + io::format_double(p))]);
    r.cum_u = row[col("cum_u")];
    r.cum_uv = row[col("cum_uv")];
    r.cum_u2 = row[col("cum_u2")];
    r.cum_u2g = row[col("cum_u2g")];
    r.cum_grad_ln_u = row[col("cum_grad_ln_u")];
    for (double p : spec.p_set)
      r.cum_grad_vp2.push_back(row[col("cum_grad_vp2_" + io::format_double(p))]);
    recs.push_back(std::move(r));
  }
  return {recs, spec};
}

std::string check_line(const Verdict& v) {
  return "CHECK " + v.name + " bound=" + io::format_double(v.bound) +
         " observed=" + io::format_double(v.observed) + " margin=" + io::format_double(v.margin) +
         (v.pass ? " PASS" : " FAIL");
}

namespace {
void require_records(const std::vector<DiagnosticsRecord>& recs, const char* where) {
  if (recs.empty()) throw UsageError(std::string(where) + ": no records");
}
}  // namespace

Verdict check_l1_bound(const std::vector<DiagnosticsRecord>& recs, const BoundConstants& bc,
                       double dt, double h) {
  require_records(recs, "check_l1_bound");
  Verdict v;
  v.name = "l1_mass_ceiling";
  v.bound = bc.c1;
  v.observed = 0.0;
  for (const auto& r : recs) v.observed = std::max(v.observed, r.mass_u + r.mass_v);
  v.margin = v.bound - v.observed;
  const double tol = (1e-6 + 5.0 * (dt + h * h)) * v.bound;
  v.pass = v.margin >= -tol;
  return v;
}

Verdict check_u2_time_integral(const std::vector<DiagnosticsRecord>& recs, const BoundConstants& bc,
                               double dt, double h) {
  require_records(recs, "check_u2_time_integral");
  Verdict v;
  v.name = "u2_time_integral";
  v.bound = bc.c2_of_T(recs.back().t);
  v.observed = recs.back().cum_u2;
  v.margin = v.bound - v.observed;
  const double tol = (1e-6 + 5.0 * (dt + h * h)) * v.bound;
  v.pass = v.margin >= -tol;
  return v;
}

Verdict check_u2g_time_integral(const std::vector<DiagnosticsRecord>& recs,
                                const BoundConstants& bc, double dt, double h) {
  require_records(recs, "check_u2g_time_integral");
  Verdict v;
  v.name = "u2g_time_integral";
  const double c1g = std::max(bc.k1_weak, bc.initial_mass);
  const double T = recs.back().t;
  v.bound = (recs.front().mass_u + T * bc.abs_rho * c1g) / bc.mu;
  v.observed = recs.back().cum_u2g;
  v.margin = v.bound - v.observed;
  const double tol = (1e-6 + 5.0 * (dt + h * h)) * v.bound;
  v.pass = v.margin >= -tol;
  return v;
}

Verdict check_v_lower_bound(const std::vector<DiagnosticsRecord>& recs, double v0_min) {
  require_records(recs, "check_v_lower_bound");
  if (!(v0_min > 0.0)) throw DomainError("check_v_lower_bound: v0_min must be > 0");
  Verdict v;
  v.name = "v_lower_bound";
  v.margin = std::numeric_limits<double>::infinity();
  for (const auto& r : recs) {
    const double floor = std::exp(-r.t) * v0_min;
    const double m = r.min_v - floor;
    if (m < v.margin) {
      v.margin = m;
      v.bound = floor;
      v.observed = r.min_v;
    }
  }
  v.pass = v.margin >= 0.0;  // zero slack: the scheme's decay dominates e^{-t} exactly
  return v;
}

}  // namespace crime
