#include "doctest.h"

#include <string>

#include "crime/config.hpp"

using namespace crime;

namespace {

std::string base_cfg() {
  return "nx = 32\nny = 32\nlx = 1.0\nly = 1.0\n"
         "rho = 2.0\nmu = 1.0\nchi = 2.0\n"
         "t_end = 1.0\noutput_every = 0.1\n";
}

bool throws_mentioning(const std::string& text, const std::string& needle) {
  try {
    parse_config_text(text, "test.cfg");
  } catch (const ConfigError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig cfg = parse_config_text(base_cfg(), "test.cfg");
  CHECK(cfg.grid.nx == 32);
  CHECK(cfg.grid.ny == 32);
  CHECK(cfg.params.rho == 2.0);
  CHECK(cfg.params.gamma == 0.0);
  CHECK(cfg.params.eps == 0.0);
  CHECK(cfg.ctrl.t_end == 1.0);
  CHECK(cfg.ctrl.dt_init == 1e-3);
  CHECK(cfg.ctrl.cfl_safety == 0.9);
  CHECK(cfg.ic.kind == IcKind::gaussian_bump);
  CHECK(cfg.output_dir == "out");
  CHECK_FALSE(cfg.write_snapshots);
  CHECK(cfg.diag.p_set == std::vector<double>{2.0, 3.0, 5.0});
}

TEST_CASE("full config overrides everything it names") {
  const std::string text = base_cfg() +
                           "gamma = 1.5\neps = 0.25\ndt_init = 5e-4\ndt_min = 1e-9\n"
                           "cfl_safety = 0.8\nv_guard = 1e-8\n"
                           "u_sup_max = 1e5\nv_w1inf_max = 2e5\nv_min_threshold = 1e-4\n"
                           "ic = seeded_random\nic_seed = 99\n"
                           "p_set = 2,4\nq = 3.5\n"
                           "output_dir = elsewhere\nsnapshots = true\n";
  const RunConfig cfg = parse_config_text(text, "test.cfg");
  CHECK(cfg.params.gamma == 1.5);
  CHECK(cfg.params.eps == 0.25);
  CHECK(cfg.ctrl.dt_init == 5e-4);
  CHECK(cfg.ctrl.dt_min == 1e-9);
  CHECK(cfg.ctrl.cfl_safety == 0.8);
  CHECK(cfg.ctrl.v_guard == 1e-8);
  CHECK(cfg.thresholds.u_sup_max == 1e5);
  CHECK(cfg.thresholds.v_w1inf_max == 2e5);
  CHECK(cfg.thresholds.v_min == 1e-4);
  CHECK(cfg.ic.kind == IcKind::seeded_random);
  CHECK(cfg.ic.seed == 99);
  CHECK(cfg.diag.p_set == std::vector<double>{2.0, 4.0});
  CHECK(cfg.diag.q == 3.5);
  CHECK(cfg.output_dir == "elsewhere");
  CHECK(cfg.write_snapshots);
}

TEST_CASE("comments, blank lines, and whitespace are tolerated") {
  const std::string text = "# run setup\n\n  nx = 16 \nny=16\n lx = 1.0\nly = 1.0\n"
                           "rho = 2.0   # growth\nmu = 1.0\nchi = 2.0\n"
                           "t_end = 0.5\noutput_every = 0.1\n";
  const RunConfig cfg = parse_config_text(text, "test.cfg");
  CHECK(cfg.grid.nx == 16);
  CHECK(cfg.params.rho == 2.0);
  CHECK(cfg.ctrl.t_end == 0.5);
}

TEST_CASE("constraint violations carry the offending constraint") {
  CHECK(throws_mentioning(base_cfg() + "mu = -1\n", "mu"));
  CHECK(throws_mentioning(base_cfg() + "eps = 1.5\n", "eps"));
  CHECK(throws_mentioning(base_cfg() + "gamma = -0.5\n", "gamma"));
  CHECK(throws_mentioning(base_cfg() + "cfl_safety = 0\n", "cfl_safety"));
}

TEST_CASE("duplicate keys are rejected with both lines") {
  const std::string text = base_cfg() + "mu = 2.0\n";  // mu already set on line 6
  try {
    parse_config_text(text, "dup.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("mu") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);
  }
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK(throws_mentioning(base_cfg() + "xn = 32\n", "xn"));
  CHECK(throws_mentioning(base_cfg() + "just a stray line\n", "line"));
  CHECK_THROWS_AS(parse_config_text(base_cfg() + "nx = banana\n", "t.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(base_cfg() + "snapshots = maybe\n", "t.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config_text(base_cfg() + "ic = vortex\n", "t.cfg"), ConfigError);
}

TEST_CASE("missing config file is a ConfigError") {
  CHECK_THROWS_AS(parse_config("no_such_file_anywhere.cfg"), ConfigError);
}

TEST_CASE("key help covers every accepted key") {
  const auto help = config_key_help();
  CHECK(help.size() >= 30);
  bool has_eps = false, has_ic = false;
  for (const auto& line : help) {
    if (line.rfind("eps\t", 0) == 0) has_eps = true;
    if (line.rfind("ic\t", 0) == 0) has_ic = true;
  }
  CHECK(has_eps);
  CHECK(has_ic);
}
