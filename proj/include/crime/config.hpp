#pragma once

// Flat key = value run configuration ("#" comments). Unknown keys, duplicate
// keys, type mismatches, and constraint violations are reported with file/line
// context. All Parameters / StepControl / grid invariants are enforced at
// parse time, before any run starts.

#include <string>
#include <vector>

#include "crime/diagnostics.hpp"
#include "crime/grid.hpp"
#include "crime/model.hpp"
#include "crime/stepper.hpp"

namespace crime {

enum class IcKind { constant, fixed_point, gaussian_bump, perturbed_homogeneous, seeded_random };

struct IcSpec {
  IcKind kind = IcKind::gaussian_bump;
  // constant
  double u0 = 0.25;
  double v0 = 1.0;
  // gaussian_bump: floor + amp * exp(-r^2 / width^2)
  double u_floor = 0.05, u_amp = 1.0, u_cx = 0.5, u_cy = 0.5, u_width = 0.15;
  double v_floor = 0.5, v_amp = 0.5, v_cx = 0.5, v_cy = 0.5, v_width = 0.2;
  // perturbed_homogeneous: fixed point * (1 + perturb * cos(pi x/lx) cos(pi y/ly))
  double perturb = 0.1;
  // seeded_random: floor + amp * xi, xi uniform in [0,1) from a fixed generator
  unsigned long long seed = 1;
};

struct RunConfig {
  Grid grid = Grid::uniform(64, 64, 1.0, 1.0);
  Parameters params{/*rho=*/2.0, /*mu=*/1.0, /*chi=*/2.0, /*gamma=*/0.0, /*eps=*/0.0};
  StepControl ctrl;
  BlowupThresholds thresholds;
  IcSpec ic;
  DiagSpec diag;
  std::string output_dir = "out";
  bool write_snapshots = false;
};

RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config(const std::string& path);

// The key list for --help and the README; one "key<TAB>default<TAB>meaning" per entry.
std::vector<std::string> config_key_help();

}  // namespace crime
