#pragma once

// Trajectory diagnostics: per-record integral quantities, running time
// integrals (left-endpoint rectangle rule on the record lattice), and
// pass/fail verdicts against the a priori bounds.

#include <string>
#include <vector>

#include "crime/io.hpp"
#include "crime/model.hpp"
#include "crime/stepper.hpp"

namespace crime {

struct DiagSpec {
  std::vector<double> p_set = {2.0, 3.0, 5.0};  // exponents for ||v||_p and grad(v^{p/2}) tracking
  double q = 0.0;                               // exponent for ||grad v||_q; 0 = auto 2 + gamma/2

  double resolved_q(double gamma) const { return q > 0.0 ? q : 2.0 + 0.5 * gamma; }
  void validate() const;
};

struct DiagnosticsRecord {
  double t = 0.0;

  // Instantaneous quantities.
  double mass_u = 0.0;  // int u
  double mass_v = 0.0;  // int v
  double linf_u = 0.0;
  double linf_v = 0.0;
  double min_v = 0.0;
  std::vector<double> lp_v;          // ||v||_p per p in p_set
  double grad_v_lq = 0.0;            // || |grad v| ||_q
  double int_u2 = 0.0;               // int u^2
  double int_u2g = 0.0;              // int u^{2+gamma}
  double int_uv = 0.0;               // int u v
  double int_grad_ln_u = 0.0;        // int |grad u|^2 / (u+1)^2
  std::vector<double> int_grad_vp2;  // int |grad v^{p/2}|^2 per p in p_set

  // Running time integrals, advanced by dt * (previous record's integrand).
  double cum_u = 0.0;
  double cum_uv = 0.0;
  double cum_u2 = 0.0;
  double cum_u2g = 0.0;
  double cum_grad_ln_u = 0.0;
  std::vector<double> cum_grad_vp2;
};

// prev = nullptr for the first record (all cumulatives start at 0).
DiagnosticsRecord compute_record(const State& s, const Parameters& p, const DiagSpec& spec,
                                 const DiagnosticsRecord* prev);

io::CsvTable records_to_csv(const std::vector<DiagnosticsRecord>& recs, const DiagSpec& spec);
// Reconstructs the records (and the p_set actually present) from a CSV table.
std::pair<std::vector<DiagnosticsRecord>, DiagSpec> records_from_csv(const io::CsvTable& table);

struct Verdict {
  std::string name;
  double bound = 0.0;
  double observed = 0.0;
  double margin = 0.0;  // bound-side slack remaining; >= -tolerance means pass
  bool pass = false;
};

// "CHECK <name> bound=<b> observed=<o> margin=<m> PASS|FAIL"
std::string check_line(const Verdict& v);

// sup_t int(u + v) <= c1, tolerance (1e-6 + 5(dt + h^2)) * bound.
Verdict check_l1_bound(const std::vector<DiagnosticsRecord>& recs, const BoundConstants& bc,
                       double dt, double h);

// cum_u2 at the final record <= c2_of_T(T), same tolerance policy.
Verdict check_u2_time_integral(const std::vector<DiagnosticsRecord>& recs, const BoundConstants& bc,
                               double dt, double h);

// gamma > 0 companion: cum_u2g <= ( int u0 + T |rho| max(k1_weak, int(u0+v0)) ) / mu.
Verdict check_u2g_time_integral(const std::vector<DiagnosticsRecord>& recs,
                                const BoundConstants& bc, double dt, double h);

// min_v >= e^{-t} * min v0 on every record, zero slack.
Verdict check_v_lower_bound(const std::vector<DiagnosticsRecord>& recs, double v0_min);

}  // namespace crime
