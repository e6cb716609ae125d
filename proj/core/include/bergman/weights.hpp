#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"

namespace bergman {

/** Subharmonic weight with invariant Laplacian pinched between m and M.
 * `laplacian` may be absent; then a finite-difference fallback is used and
 * `analytic_laplacian` records the choice.  m = 0 is tolerated as a
 * degenerate case (harmonic weights in diagnostics); operations that need a
 * positive lower bound check it themselves. */
struct Weight {
  RealFn value;
  RealFn laplacian;  // empty: finite differences
  double m = 0.0;
  double M = 0.0;
  std::string spec;  // e.g. "standard:1"

  bool analytic_laplacian() const { return static_cast<bool>(laplacian); }
  double value_at(DiskPoint z) const { return value(z); }
  double laplacian_at(DiskPoint z) const;
};

/** Weight shifted by alpha: tau = phi - alpha log(1/(1-|z|^2)).
 * Bounds move to (m - alpha, M - alpha); they may be negative, recorded as
 * data.  Key identity: e^{-p phi} / (1-|z|^2) = e^{-p tau} (1-|z|^2)^{alpha p - 1}. */
struct NormalizedWeight {
  RealFn value;
  RealFn laplacian;
  double alpha = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

/** Nonnegative potential tau_a = phi - h_a with h_a harmonic, normalized on
 * the Moebius-centered truncated disk.  tau_a(a) <= C * M with C measured. */
class GreenPotential {
 public:
  GreenPotential(const Weight& phi, DiskPoint a, int grid_res);

  // tau_a at z; requires psh_distance(a, z) <= truncation()
  double operator()(DiskPoint z) const;

  // the transported potential phi_a(w) = tau_a(M_a(w)) on |w| <= truncation()
  double centered(DiskPoint w) const;

  DiskPoint center() const { return a_; }
  double truncation() const { return rho_t_; }
  double at_center() const;         // tau_a(a)
  double c_report() const;          // tau_a(a) / M, 0 when M = 0
  bool laplacian_check_ok() const { return lap_ok_; }
  double laplacian_max_err() const { return lap_err_; }

 private:
  double poisson(DiskPoint w) const;  // harmonic extension of boundary data

  DiskPoint a_;
  double rho_t_;
  double m_big_;
  double min_shift_ = 0.0;
  std::vector<double> boundary_;     // phi(M_a(zeta_j)) on |zeta| = rho_t
  RealFn phi_centered_;
  bool lap_ok_ = true;
  double lap_err_ = 0.0;
};

// alpha log(1/(1-|z|^2)); requires alpha > 0
Weight standard_weight(double alpha);

// standard weight plus the harmonic bump amplitude * Re(z^2)
Weight perturbed_standard_weight(double alpha, double amplitude);

// "standard:<alpha>" | "perturbed-standard:<alpha>:<amplitude>"
Weight parse_weight_spec(const std::string& spec);

NormalizedWeight alpha_shift(const Weight& phi, double alpha);

// circle mean minus the center value: hat(phi)(r)
double weight_mean(const RealFn& phi, double r, int n);
double weight_mean(const Weight& phi, double r, int n);

/** (1/pi) Int_{rD} lap(z) log(r^2/|z|^2) dlambda(z).  Graded radial rule for
 * the logarithmic factor.  For lap == 1 this equals log(1/(1-r^2)). */
double green_mean(const Weight& phi, double r, int grid_res);
double green_mean_of(const RealFn& lap, double r, int grid_res);

// sigma_r-type constant: (1/(pi L)) Int_{rD} log(r^2/|z|^2) log(1/(1-|z|^2)) dlambda
double log_weight_smoothing_gap(double r, int grid_res);

GreenPotential green_potential(const Weight& phi, DiskPoint a, int grid_res);

// pullback under the involution M_a; same Laplacian bounds
Weight transport(const Weight& phi, DiskPoint a);

}  // namespace bergman
