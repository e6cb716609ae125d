#pragma once

#include <string>
#include <vector>

#include "bergman/density.hpp"
#include "bergman/geometry.hpp"
#include "bergman/schemes.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/** Complex values on the square lattice of spacing h clipped to |z| <= r_max.
 * The lattice is centered: index (ix, iy) sits at ((ix-k)h, (iy-k)h) with
 * k = (n-1)/2.  Nodes outside the disk are stored (as zeros) so the array
 * stays rectangular. */
struct GridFunction {
  double h = 0.0;
  double r_max = 0.0;
  int n = 0;
  std::vector<Complex> v;

  int half() const { return (n - 1) / 2; }
  DiskPoint point(int ix, int iy) const {
    return DiskPoint((ix - half()) * h, (iy - half()) * h);
  }
  bool inside(int ix, int iy) const {  // raw check: corner nodes may leave the disk
    const double x = (ix - half()) * h, y = (iy - half()) * h;
    return x * x + y * y <= r_max * r_max + 1e-15;
  }
  Complex at(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * n + ix]; }
  Complex& at(int ix, int iy) { return v[static_cast<std::size_t>(iy) * n + ix]; }
};

GridFunction make_grid_function(double h, double r_max);
GridFunction sample_grid(const AnalyticFn& f, double h, double r_max);

// CSV: "h,r_max,n" header line, then one "re,im" row per node (row-major);
// lines starting with '#' before the header are skipped on load.
// Binary: magic, the same header fields, then raw little-endian doubles.
void save_grid_csv(const GridFunction& g, const std::string& path);
GridFunction load_grid_csv(const std::string& path);
void save_grid_bin(const GridFunction& g, const std::string& path);
GridFunction load_grid_bin(const std::string& path);

/** Bumps (1 - (psi(z, a_j)/rho)^2)^3 on the metric balls D(a_j, rho),
 * normalized by their pointwise sum.  Centers come from hyperbolic_lattice,
 * extended past r_max so the working disk has no covering gap. */
struct PartitionOfUnity {
  std::vector<DiskPoint> centers;
  double spacing = 0.0;
  double rho = 0.0;
  double r_max = 0.0;

  double bump(int j, DiskPoint z) const;   // unnormalized profile
  std::vector<double> at(DiskPoint z) const;  // normalized, sums to 1
};

PartitionOfUnity partition_of_unity(double spacing, double rho, double r_max);

/** Local maximal function on the metric balls D(zeta, 1/2): the q-th root of
 * the node average of |f|^q (supremum for q = infinity).  Nodes whose ball
 * pokes past the grid radius are left at zero; use mq_at to get the strict
 * coverage error. */
GridFunction mq_maximal(const GridFunction& f, double q);
double mq_at(const GridFunction& f, double q, DiskPoint zeta);

/** Bound check for a constructed g_a: sampled max and center value of
 * |g_a e^{k_Z - phi}| (1 - |M_a|^2)^{alpha - eps}.  Since g carries a free
 * scale, the upper limit is relative to the value at a (a fixed calibrated
 * ratio); the lower limit is an absolute floor on that value.  upper_ok
 * flips once the density crosses alpha. */
struct GBoundReport {
  double upper_max = 0.0;
  double at_a = 0.0;
  double eps = 0.0;
  double smoothing_r = 0.0;
  double upper_limit = 0.0;
  double lower_limit = 0.0;
  bool upper_ok = false;
  bool lower_ok = false;
};

struct GConstruction {
  AnalyticFn g;
  GBoundReport report;
};

/** Nonvanishing analytic g_a with |g_a e^{k_Z - phi}| controlled by
 * (1 - |M_a(z)|^2)^{-(alpha - eps)}: the harmonic majorant of the smoothed
 * -(tau * sigma_r) is completed to an analytic function on the truncated
 * ball around a (Fourier conjugation on circle_res nodes) and exponentiated.
 * eps <= 0 requests the default (alpha - measured density) / 2, capped at
 * alpha / 2.  The check samples the whole ball around a, so a truncated
 * sequence should be probed from deep inside its support (a = 0 for the
 * test lattices); the rim past the truncation reads as a density drop. */
GConstruction construct_g(DiskPoint a, const PointSet& z_set, const Weight& phi,
                          double alpha, double eps = 0.0, int circle_res = 256);

struct DbarSolution {
  GridFunction u;
  double residual_rel = 0.0;  // ||(1-|z|^2) dbar u - f||_2 / ||f||_2 on the grid
  double norm_ratio = 0.0;    // ||u|| / ||f|| in the weighted grid norm
  int kernel_order = 0;
  int moment_terms = 0;       // largest moment-series truncation used
};

/** Solves (1 - |z|^2) dbar u = f through the bump decomposition
 *   u = (1/pi) sum_j g_j(z) Int gamma_j f / g_j (1-|w|^2)^{m-1}
 *                             / ((z-w)(1-conj(w)z)^m) dA(w).
 * The Cauchy part is an FFT convolution (singular cell excluded, with the
 * O(h) analytic correction); the (1-conj(w)z)^{-q} parts go through moment
 * expansions.  A single-center partition short-circuits g to 1. */
DbarSolution solve_dbar(const GridFunction& f, const PointSet& z_set,
                        const Weight& phi, double p, double alpha,
                        int kernel_order, const PartitionOfUnity& pou);

// weighted grid norm (sum |v|^p e^{-p phi} e^{p k_Z} (1-|z|^2)^{alpha p - 1} h^2)^{1/p};
// the measurable-integrand counterpart of the zero-set space norm
double grid_space_norm(const GridFunction& g, const PointSet& z_set,
                       const Weight& phi, double p, double alpha);

struct InterpolationSolution {
  std::vector<Complex> coefficients;  // global polynomial, ascending degree
  double achieved_norm = 0.0;
  std::vector<double> residuals;      // per jet constraint, absolute
  double K_estimate = 0.0;            // achieved_norm / (sum ||w_k||^p)^{1/p}
  bool converged = true;
  int iterations = 0;
};

/** Least-norm interpolant over a polynomial ansatz: minimizes the truncated
 * A^{p,alpha}_phi norm subject to every cluster jet (p = 2 exact, otherwise
 * reweighted).  K_estimate divides by the coset norms of the inputs. */
InterpolationSolution solve_interpolation(const InterpolationScheme& scheme,
                                          const std::vector<Jet>& jets,
                                          const Weight& phi, double p, double alpha,
                                          int global_dim = 24, int quad_res = 48);

/** O-interpolation data for distinct points: nearest-neighbor separations
 * delta_a, local counts n_a (strict psi < 1/2, counting the point itself),
 * the finiteness sum  sum |c_a|^p e^{-p phi(a)} delta_a^{-p n_a} (1-|a|^2),
 * a built scheme with simple-value jets, and the measured constant bounding
 * each coset norm by its cluster's share of the sum. */
struct OInterpolationSetup {
  std::vector<double> delta;          // per entry of z_set, canonical order
  std::vector<int> local_count;
  double finiteness_sum = 0.0;
  InterpolationScheme scheme;
  std::vector<Jet> jets;
  std::vector<double> cluster_bounds; // per pair: local share of the sum
  std::vector<double> coset_norms;    // per pair
  double c_measured = 0.0;            // max_k coset_norm^p / cluster_bound
};

OInterpolationSetup o_interpolation_setup(const PointSet& z_set,
                                          const std::vector<Complex>& values,
                                          const Weight& phi, double p);

}  // namespace bergman
