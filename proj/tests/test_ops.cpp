#include "doctest.h"

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crime/harness.hpp"
#include "crime/ops.hpp"

using namespace crime;

namespace {

Field random_field(const Grid& g, uint64_t seed, double lo = 0.0, double hi = 2.0) {
  std::mt19937_64 gen(seed);
  Field f(g);
  for (double& x : f.data) x = lo + (hi - lo) * ((gen() >> 11) * 0x1p-53);
  return f;
}

Parameters taxis_params(double chi, double eps) {
  Parameters p;
  p.rho = 0.0;
  p.mu = 1.0;
  p.chi = chi;
  p.eps = eps;
  return p;
}

}  // namespace

TEST_CASE("laplacian of a constant vanishes") {
  const Grid g = Grid::uniform(8, 5, 2.0, 1.0);
  const Field f(g, 3.7);
  const Field lf = ops::laplacian_neumann(f);
  for (double x : lf.data) CHECK(x == 0.0);
}

TEST_CASE("laplacian conserves the integral") {
  const Grid g = Grid::uniform(32, 32, 1.0, 1.0);
  const Field f = random_field(g, 99);
  const Field lf = ops::laplacian_neumann(f);
  // all fluxes telescope; only rounding survives
  CHECK(std::abs(ops::integrate(lf)) <= 1e-11 * (1.0 + ops::max_abs(lf)));
}

TEST_CASE("reflected cosine modes are exact eigenvectors") {
  const Grid g = Grid::uniform(32, 24, 1.0, 1.5);
  Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      f(i, j) = std::cos(M_PI * g.x(i) / g.lx) * std::cos(2.0 * M_PI * g.y(j) / g.ly);
  const double lam_x = 2.0 / (g.dx() * g.dx()) * (1.0 - std::cos(M_PI * g.dx() / g.lx));
  const double lam_y = 2.0 / (g.dy() * g.dy()) * (1.0 - std::cos(2.0 * M_PI * g.dy() / g.ly));
  const Field lf = ops::laplacian_neumann(f);
  double worst = 0.0;
  for (size_t k = 0; k < lf.data.size(); ++k)
    worst = std::max(worst, std::abs(lf.data[k] + (lam_x + lam_y) * f.data[k]));
  CHECK(worst <= 1e-10);
}

TEST_CASE("laplacian is second-order accurate") {
  std::vector<double> hs, errs;
  for (int n : {16, 32, 64, 128}) {
    const Grid g = Grid::uniform(n, n, 1.5, 1.0);
    Field f(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        f(i, j) = std::cos(M_PI * g.x(i) / g.lx) * std::cos(2.0 * M_PI * g.y(j) / g.ly);
    const double lam = M_PI * M_PI * (1.0 / (g.lx * g.lx) + 4.0 / (g.ly * g.ly));
    const Field lf = ops::laplacian_neumann(f);
    double worst = 0.0;
    for (size_t k = 0; k < lf.data.size(); ++k)
      worst = std::max(worst, std::abs(lf.data[k] + lam * f.data[k]));
    hs.push_back(g.dx());
    errs.push_back(worst);
  }
  const double slope = fit_loglog_slope(hs, errs);
  CHECK(slope >= 1.9);
  CHECK(slope <= 2.1);
}

TEST_CASE("centered gradient: constants, linear fields, wall-normal zeros") {
  const Grid g = Grid::uniform(64, 64, 1.0, 1.0);

  const VectorField gc = ops::gradient_centered(Field(g, 2.5));
  for (double x : gc.x) CHECK(x == 0.0);
  for (double y : gc.y) CHECK(y == 0.0);

  Field f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f(i, j) = g.x(i);
  const VectorField gf = ops::gradient_centered(f);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const size_t k = static_cast<size_t>(j) * g.nx + i;
      if (i == 0 || i == g.nx - 1)
        CHECK(gf.x[k] == 0.0);  // wall-normal component is defined to vanish
      else
        CHECK(gf.x[k] == 1.0);  // dyadic differences, exact
      CHECK(gf.y[k] == 0.0);
    }
}

TEST_CASE("taxis divergence: zero cases and positivity requirement") {
  const Grid g = Grid::uniform(8, 8, 1.0, 1.0);
  const Parameters p = taxis_params(2.0, 0.1);

  const Field u = random_field(g, 7, 0.0, 3.0);
  const Field div_const_v = ops::taxis_divergence(u, Field(g, 1.5), p);
  for (double x : div_const_v.data) CHECK(x == 0.0);

  const Field v = random_field(g, 8, 0.5, 2.0);
  const Field div_zero_u = ops::taxis_divergence(Field(g, 0.0), v, p);
  for (double x : div_zero_u.data) CHECK(x == 0.0);

  Field vbad = v;
  vbad(3, 4) = 0.0;
  CHECK_THROWS_AS(ops::taxis_divergence(u, vbad, p), DomainError);
  vbad(3, 4) = -0.2;
  CHECK_THROWS_AS(ops::taxis_divergence(u, vbad, p), DomainError);
}

TEST_CASE("taxis divergence matches a hand-computed two-cell flux") {
  // 2x2 grid, v increasing in x only: a single active face per row. The donor
  // is the low-v cell, so with u = (a, b) the face flux is
  //   chi * eta(a) * (a / v_face) * (dv / dx).
  const Grid g = Grid::uniform(2, 2, 1.0, 1.0);
  Field u(g), v(g);
  for (int j = 0; j < 2; ++j) {
    u(0, j) = 1.0;
    u(1, j) = 5.0;  // not the donor; must not enter
    v(0, j) = 1.0;
    v(1, j) = 2.0;
  }
  const Field div = ops::taxis_divergence(u, v, taxis_params(2.0, 0.0));
  const double q = 2.0 * (1.0 / 1.5) * (1.0 / 0.5);  // = 8/3
  for (int j = 0; j < 2; ++j) {
    CHECK(div(0, j) == doctest::Approx(q / 0.5).epsilon(1e-14));    // 16/3: mass leaves the low-v cell
    CHECK(div(1, j) == doctest::Approx(-q / 0.5).epsilon(1e-14));   // arrives at the high-v cell
  }
  // reversing the slope switches the donor to cell 1
  for (int j = 0; j < 2; ++j) {
    v(0, j) = 2.0;
    v(1, j) = 1.0;
  }
  const Field div2 = ops::taxis_divergence(u, v, taxis_params(2.0, 0.0));
  const double q2 = 2.0 * (5.0 / 1.5) * (1.0 / 0.5);
  for (int j = 0; j < 2; ++j) {
    CHECK(div2(1, j) == doctest::Approx(q2 / 0.5).epsilon(1e-14));
    CHECK(div2(0, j) == doctest::Approx(-q2 / 0.5).epsilon(1e-14));
  }
}

TEST_CASE("taxis divergence conserves mass and respects the cutoff") {
  const Grid g = Grid::uniform(24, 24, 1.0, 2.0);
  const Field u = random_field(g, 21, 0.0, 4.0);
  const Field v = random_field(g, 22, 0.5, 3.0);
  const Field div = ops::taxis_divergence(u, v, taxis_params(3.0, 0.3));
  CHECK(std::abs(ops::integrate(div)) <= 1e-11 * (1.0 + ops::max_abs(div)));

  // u above the cutoff support everywhere => no flux at all
  const Field ubig = random_field(g, 23, 11.0, 14.0);  // 1/eps = 10
  const Field div_cut = ops::taxis_divergence(ubig, v, taxis_params(3.0, 0.1));
  for (double x : div_cut.data) CHECK(x == 0.0);
}

TEST_CASE("integrate: constants, dyadic linear field, single cell") {
  const Grid g1 = Grid::uniform(64, 64, 2.0, 0.5);
  CHECK(ops::integrate(Field(g1, 3.0)) == 3.0);  // area 1, all sums exact

  const Grid g2 = Grid::uniform(64, 64, 1.0, 1.0);
  Field fx(g2);
  for (int j = 0; j < g2.ny; ++j)
    for (int i = 0; i < g2.nx; ++i) fx(i, j) = g2.x(i);
  CHECK(ops::integrate(fx) == 0.5);  // every partial sum is a dyadic rational

  const Grid g3 = Grid::uniform(2, 2, 1.0, 1.0);
  Field one(g3, 0.0);
  one(1, 0) = 1.0;
  CHECK(ops::integrate(one) == g3.cell_area());
}

TEST_CASE("lp_norm examples and domain check") {
  const Grid g = Grid::uniform(16, 16, 1.0, 1.0);
  CHECK(ops::lp_norm(Field(g, 2.0), 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(ops::lp_norm(Field(g, 0.0), 5.0) == 0.0);
  CHECK(ops::lp_norm(Field(g, -2.0), 3.0) == doctest::Approx(2.0).epsilon(1e-15));

  const Grid g2 = Grid::uniform(2, 2, 1.0, 1.0);
  Field f(g2);
  f(0, 0) = 1.0;
  f(1, 0) = 1.0;
  f(0, 1) = 2.0;
  f(1, 1) = 2.0;
  CHECK(ops::lp_norm(f, 3.0) == doctest::Approx(std::cbrt(4.5)).epsilon(1e-14));

  CHECK_THROWS_AS(ops::lp_norm(f, 0.5), DomainError);

  // nondecreasing in p when the domain has area 1 and |f| >= 1
  const Grid ga = Grid::uniform(16, 16, 2.0, 0.5);
  const Field h = random_field(ga, 31, 1.0, 3.0);
  double prev = 0.0;
  for (double p : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    const double n = ops::lp_norm(h, p);
    CHECK(n >= prev - 1e-13);
    prev = n;
  }
}

TEST_CASE("grad_power_integral: constants, linear hand value, p = 3 cross-check") {
  const Grid g = Grid::uniform(4, 4, 1.0, 1.0);
  CHECK(ops::grad_power_integral(Field(g, 1.3), 2.0) == 0.0);

  Field v(g);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) v(i, j) = 1.0 + g.x(i);
  // p = 2: integrand |grad v|^2 = 1 on the 8 interior-x cells, 0 on wall cells
  CHECK(ops::grad_power_integral(v, 2.0) == doctest::Approx(0.5).epsilon(1e-14));

  // p = 3 against an independent recomputation (different summation order)
  const Grid gb = Grid::uniform(12, 10, 1.0, 1.5);
  const Field vb = random_field(gb, 41, 0.2, 2.0);
  Field w(gb);
  for (size_t k = 0; k < w.data.size(); ++k) w.data[k] = std::pow(vb.data[k], 1.5);
  const VectorField gw = ops::serial::gradient_centered(w);
  double acc = 0.0;
  for (size_t k = gw.x.size(); k-- > 0;) acc += gw.x[k] * gw.x[k] + gw.y[k] * gw.y[k];
  const double expected = acc * gb.cell_area();
  CHECK(ops::grad_power_integral(vb, 3.0) == doctest::Approx(expected).epsilon(1e-12));

  Field vneg(g, 1.0);
  vneg(2, 2) = -0.1;
  CHECK_THROWS_AS(ops::grad_power_integral(vneg, 2.0), DomainError);
  CHECK_THROWS_AS(ops::grad_power_integral(v, 0.5), DomainError);
}

TEST_CASE("reductions") {
  const Grid g = Grid::uniform(5, 3, 1.0, 1.0);
  Field f(g, 1.0);
  f(2, 1) = -7.0;
  f(4, 2) = 3.0;
  CHECK(ops::min_value(f) == -7.0);
  CHECK(ops::max_value(f) == 3.0);
  CHECK(ops::max_abs(f) == 7.0);

  Field a(g, 2.0), b(g, 0.5);
  CHECK(ops::dot(a, b) == 15.0);  // 15 cells * 1.0

  const Grid g2 = Grid::uniform(3, 3, 1.0, 1.0);
  Field c(g2, 1.0);
  CHECK_THROWS_AS(ops::dot(a, c), UsageError);
}

TEST_CASE("parallel and serial kernels agree bitwise at any thread count") {
  const Grid g = Grid::uniform(48, 40, 1.3, 0.9);
  const Field u = random_field(g, 101, 0.0, 4.0);
  const Field v = random_field(g, 102, 0.4, 2.5);
  const Parameters p = taxis_params(2.0, 0.2);

  const Field lap_s = ops::serial::laplacian_neumann(u);
  const VectorField grad_s = ops::serial::gradient_centered(v);
  const Field tax_s = ops::serial::taxis_divergence(u, v, p);
  const double int_s = ops::serial::integrate(u);
  const double lp_s = ops::serial::lp_norm(u, 3.0);
  const double gp_s = ops::serial::grad_power_integral(v, 3.0);
  const double dot_s = ops::serial::dot(u, v);
  const double ma_s = ops::serial::max_abs(u);
  const double mn_s = ops::serial::min_value(v);
  const double mx_s = ops::serial::max_value(v);

  auto bits_equal = [](const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  };

  for (int threads : {1, 2, 4}) {
#ifdef _OPENMP
    omp_set_num_threads(threads);
#else
    (void)threads;
#endif
    CHECK(bits_equal(ops::laplacian_neumann(u).data, lap_s.data));
    const VectorField grad_p = ops::gradient_centered(v);
    CHECK(bits_equal(grad_p.x, grad_s.x));
    CHECK(bits_equal(grad_p.y, grad_s.y));
    CHECK(bits_equal(ops::taxis_divergence(u, v, p).data, tax_s.data));
    CHECK(ops::integrate(u) == int_s);
    CHECK(ops::lp_norm(u, 3.0) == lp_s);
    CHECK(ops::grad_power_integral(v, 3.0) == gp_s);
    CHECK(ops::dot(u, v) == dot_s);
    CHECK(ops::max_abs(u) == ma_s);
    CHECK(ops::min_value(v) == mn_s);
    CHECK(ops::max_value(v) == mx_s);
  }
}
