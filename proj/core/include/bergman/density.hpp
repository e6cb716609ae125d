#pragma once

#include <string>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/** Density values S_{phi_a}(Z_a, r) over an (a, r) grid, with the sup curve
 * over transports and its tail maximum.  The true quantity is a limsup over
 * r of a sup over all of the disk; the report keeps the raw curves so the
 * caller can judge the tail, and `converged` is only a heuristic (spread of
 * the sup curve over the top quartile of radii within two percent of scale). */
struct DensityReport {
  std::vector<double> r_grid;               // ascending
  std::vector<DiskPoint> a_grid;            // transports actually evaluated
  std::vector<std::vector<double>> values;  // values[i][j]: a_grid[i], r_grid[j]
  std::vector<double> sup_per_r;
  double estimate = 0.0;  // max of sup_per_r over r >= r0
  double r0 = 0.9;
  bool converged = false;
  // set when a truncated generator forced cells to a smaller certified radius
  bool truncation_capped = false;

  std::string to_csv() const;       // columns a_re,a_im,r,S_value
  std::string summary_json() const; // {"converged":..,"estimate":..,"r0":..}
};

// k_hat(Z, r) / log(1/(1-r^2))
double s_plain(const PointSet& z_set, double r);

// (k_hat(Z, r) - hat(phi)(r)) / log(1/(1-r^2))
double s_weighted(const PointSet& z_set, const Weight& phi, double r,
                  int circle_samples = 2048);

std::vector<double> default_r_grid();     // 0.90 to 0.975 step 0.025, then 0.995
std::vector<DiskPoint> default_a_grid();  // hyperbolic lattice, spacing 0.3, up to 0.95

DensityReport s_uniform_estimate(const PointSet& z_set, const Weight& phi,
                                 const std::vector<double>& r_grid,
                                 const std::vector<DiskPoint>& a_grid,
                                 double r0 = 0.9);

/** S_{phi_a}(Z_a, r) through the invariant-Laplacian route,
 *   alpha + (1/(pi L(r))) Int_{|w|<r} g(M_a(w)) log(r^2/|w|^2) dlambda(w)
 * with g = (lap k_Z) - (lap phi) - alpha.  The alpha added back cancels the
 * one in g exactly; the split is kept so the integrand matches the
 * alpha-normalized decomposition of the weight. */
double s_via_laplacian(const PointSet& z_set, const Weight& phi, double alpha,
                       DiskPoint a, double r, int grid_res = 64);

/** Invariant convolution (g * sigma_r)(a) where
 * sigma_r = log(r^2/|z|^2) chi_{rD} / (pi log(1/(1-r^2))) has unit invariant
 * mass, so constants reproduce. */
double sigma_convolution(const RealFn& g, double r, DiskPoint a,
                         int grid_res = 64);

// max over probes of |tau(z) - (tau * sigma_r)(z)|
double tau_smoothing_gap(const RealFn& tau, double r,
                         const std::vector<DiskPoint>& probes,
                         int grid_res = 48);

}  // namespace bergman
