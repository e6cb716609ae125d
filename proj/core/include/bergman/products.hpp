#pragma once

#include "bergman/geometry.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/** Value of the canonical product in log-polar form.  `log_modulus` stays
 * finite for any set size; `value()` may underflow to 0 for huge sets and
 * the log form is then the authoritative one. */
struct ProductEvaluation {
  double log_modulus = 0.0;
  Complex phase = 1.0;   // unit modulus, meaningless when at_zero
  bool at_zero = false;  // z coincides with a point of the set
  int terms_used = 0;    // multiplicity-weighted factor count

  Complex value() const;
};

/** The product z^m prod_{a != 0} w_a(z) e^{1 - w_a(z)} with
 * w_a(z) = conj(a) (a - z)/(1 - conj(a) z) and m the origin multiplicity.
 * Factors are accumulated in canonical set order with compensated sums. */
ProductEvaluation psi_eval(const PointSet& z_set, DiskPoint z);

/** prod |a|^2 e^{1-|a|^2}; requires the set to stay out of D(0, delta)
 * (and in particular off the origin). */
double psi_at_zero(const PointSet& z_set, double delta = 0.0);

struct ZeroSetNormResult {
  double value = 0.0;        // integral over |z| <= r_max
  double outer_share = 0.0;  // fraction contributed by the outermost annulus
  double r_max = 0.999;
};

/** Truncated quadrature of  |F|^p e^{-p phi} e^{p k_Z} (1-|z|^2)^{alpha p - 1} dA
 * over |z| <= r_max.  Annuli are graded geometrically in 1-r^2 so the
 * boundary factor (integrable also for alpha p < 1) is resolved; the
 * outermost-annulus share is reported since the improper integral is never
 * claimed to have converged. */
ZeroSetNormResult zero_space_norm(const AnalyticFn& big_f, const PointSet& z_set,
                                  const Weight& phi, double p, double alpha,
                                  int quad_res = 96, double r_max = 0.999);

/** g = f / Psi_Z with the removable singularities filled in: within
 * pseudohyperbolic radius 0.5 * (local separation) of a set point the value
 * comes from a Taylor quotient sampled on a surrounding circle, elsewhere
 * from the direct log-space quotient.  Throws when the circle samples betray
 * a pole, i.e. f fails to vanish to the multiplicities of the set. */
Complex divide_by_product(const AnalyticFn& f, const PointSet& z_set, DiskPoint z);

}  // namespace bergman
