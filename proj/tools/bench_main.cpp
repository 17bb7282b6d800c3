// Benchmark of the OpenMP grid kernels against the serial reference
// implementations. Every pair must agree bitwise (the parallel reductions are
// ordered), so the table doubles as an equivalence check; exit code 1 if any
// pair differs.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "crime/model.hpp"
#include "crime/ops.hpp"

using namespace crime;

namespace {

double ms_per_rep(const std::function<void()>& f, int reps) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool bits_equal(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

struct RowResult {
  double t_par = 0.0;
  double t_ser = 0.0;
  bool match = false;
};

void print_row(const char* name, const RowResult& r, bool& all_match) {
  std::printf("%-22s %10.3f %10.3f %8.2fx   %s\n", name, r.t_ser, r.t_par,
              r.t_par > 0.0 ? r.t_ser / r.t_par : 0.0, r.match ? "bitwise-equal" : "MISMATCH");
  all_match = all_match && r.match;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int n = 256;
  int reps = 20;
  app.add_option("--n", n, "grid size (n x n)");
  app.add_option("--reps", reps, "repetitions per kernel");
  CLI11_PARSE(app, argc, argv);
  if (n < 2 || reps < 1) {
    std::fprintf(stderr, "need n >= 2 and reps >= 1\n");
    return 2;
  }

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("serial build (no OpenMP)\n");
#endif
  std::printf("grid %dx%d, %d reps\n\n", n, n, reps);
  std::printf("%-22s %10s %10s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");

  const Grid g = Grid::uniform(n, n, 1.0, 1.0);
  Field u(g), v(g);
  std::mt19937_64 gen(12345);
  auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1p-53; };
  for (auto& x : u.data) x = 2.0 * unit();
  for (auto& x : v.data) x = 1.0 + unit();

  Parameters p;
  p.rho = 2.0;
  p.mu = 1.0;
  p.chi = 2.0;
  p.eps = 0.1;

  bool all_match = true;
  RowResult r;

  {
    Field a, b;
    r.t_par = ms_per_rep([&] { a = ops::laplacian_neumann(u); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::laplacian_neumann(u); }, reps);
    r.match = bits_equal(a.data, b.data);
    print_row("laplacian_neumann", r, all_match);
  }
  {
    VectorField a, b;
    r.t_par = ms_per_rep([&] { a = ops::gradient_centered(v); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::gradient_centered(v); }, reps);
    r.match = bits_equal(a.x, b.x) && bits_equal(a.y, b.y);
    print_row("gradient_centered", r, all_match);
  }
  {
    Field a, b;
    r.t_par = ms_per_rep([&] { a = ops::taxis_divergence(u, v, p); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::taxis_divergence(u, v, p); }, reps);
    r.match = bits_equal(a.data, b.data);
    print_row("taxis_divergence", r, all_match);
  }
  {
    double a = 0.0, b = 0.0;
    r.t_par = ms_per_rep([&] { a = ops::integrate(u); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::integrate(u); }, reps);
    r.match = bits_equal(a, b);
    print_row("integrate", r, all_match);
  }
  {
    double a = 0.0, b = 0.0;
    r.t_par = ms_per_rep([&] { a = ops::lp_norm(v, 3.0); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::lp_norm(v, 3.0); }, reps);
    r.match = bits_equal(a, b);
    print_row("lp_norm(p=3)", r, all_match);
  }
  {
    double a = 0.0, b = 0.0;
    r.t_par = ms_per_rep([&] { a = ops::grad_power_integral(v, 3.0); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::grad_power_integral(v, 3.0); }, reps);
    r.match = bits_equal(a, b);
    print_row("grad_power_integral", r, all_match);
  }
  {
    double a = 0.0, b = 0.0;
    r.t_par = ms_per_rep([&] { a = ops::dot(u, v); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::dot(u, v); }, reps);
    r.match = bits_equal(a, b);
    print_row("dot", r, all_match);
  }
  {
    double a = 0.0, b = 0.0;
    r.t_par = ms_per_rep([&] { a = ops::max_abs(u); }, reps);
    r.t_ser = ms_per_rep([&] { b = ops::serial::max_abs(u); }, reps);
    r.match = bits_equal(a, b);
    print_row("max_abs", r, all_match);
  }

  std::printf("\n%s\n", all_match ? "all kernels bitwise-equal" : "MISMATCH detected");
  return all_match ? 0 : 1;
}
