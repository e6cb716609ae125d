#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman::cli {

// exit codes: 0 success, 2 config error, 3 non-convergence, 4 I/O error
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNoConvergence = 3;
inline constexpr int kIoError = 4;

/** One batch run.  Flags override config-file keys, which override the
 * defaults below; `run(RunConfig)` assumes the merge already happened.
 * Every emitted file carries a manifest echoing the effective values, so a
 * rerun of the same config is byte-identical. */
struct RunConfig {
  std::string command;  // density | scheme-build | scheme-check | coset-norm |
                        // interp-solve | dbar-solve | zeroset-norm | oi-check

  // inputs: a file path or a generator spec ("lattice:<spacing>:<r_max>",
  // "random:<count>:<r_max>" with a mandatory seed, "none" for the empty set)
  std::string points = "none";
  std::string scheme;  // scheme JSON path (scheme-check, coset-norm, interp-solve)
  std::string jets;    // jet-data JSON path; empty = interpolate the constant 1
  std::string f_grid;  // dbar data grid (.csv or .bin); empty = built-in bump

  std::string weight = "standard:1";
  double p = 2.0;
  double alpha = 0.5;

  std::string r_grid;      // "a:b:step" or a single radius; empty = module default
  double a_spacing = 0.3;  // transport-grid spacing for density sweeps
  std::optional<std::uint64_t> seed;  // required by "random:" inputs
  std::string out = "bergman-run";    // output prefix: <out>.json / <out>.csv
  int quad_res = 48;
  double tol = 0.0;  // dbar residual gate; 0 disables the non-convergence exit

  double delta = 0.15;  // scheme-build linkage scale
  double eps = 0.05;    // scheme-build clearance
  int basis_dim = 16;   // coset-norm polynomial degree bound
  int global_dim = 24;  // interp-solve ansatz dimension
  int kernel_order = 1;
  int grid_n = 257;  // dbar working grid side (odd) and its radius
  double grid_r_max = 0.8;
  double pou_spacing = 0.992;  // defaults give a single-chart partition
  double pou_rho = 0.88;

  std::vector<Complex> values;  // oi-check data; empty = all ones
  std::vector<Complex> poly;    // zeroset-norm integrand coefficients; empty = {1}
};

// flags > config file > defaults; throws std::invalid_argument on bad keys
RunConfig make_config(const std::vector<std::string>& args);

int run(const RunConfig& config);

// parse + dispatch; maps exceptions onto the exit codes above
int run(const std::vector<std::string>& args);

}  // namespace bergman::cli
