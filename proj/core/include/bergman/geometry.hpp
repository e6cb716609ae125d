#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

/** Point of the open unit disk.  Invariant: re^2 + im^2 < 1. */
struct DiskPoint {
  double re = 0.0;
  double im = 0.0;

  DiskPoint() = default;
  DiskPoint(double re_, double im_);
  DiskPoint(Complex z);  // NOLINT: implicit by design, points mix with complex arithmetic

  Complex c() const { return {re, im}; }
  double abs2() const { return re * re + im * im; }
  double abs() const;
};

/** Pseudohyperbolic disk D(center, radius), radius in (0, 1). */
struct DiskRegion {
  DiskPoint center;
  double radius = 0.0;

  DiskRegion() = default;
  DiskRegion(DiskPoint center_, double radius_);
};

/** Euclidean disk strictly inside the unit disk.  Every DiskRegion is one and
 * vice versa; conversions below. */
struct EuclidDisk {
  Complex center{0.0, 0.0};
  double radius = 0.0;
};

enum class Measure { area, invariant };

/** Quadrature rule on a region: nodes strictly inside the unit disk, positive
 * weights.  Product rule, polar in the Euclidean realization of the region:
 * Gauss-Legendre radially, trapezoid in angle. */
struct DiskGrid {
  std::vector<DiskPoint> nodes;
  std::vector<double> weights;

  double total() const;
};

using RealFn = std::function<double(DiskPoint)>;
using AnalyticFn = std::function<Complex(DiskPoint)>;

// pseudohyperbolic metric |z - w| / |1 - conj(w) z|
double psh_distance(DiskPoint z, DiskPoint w);

// involution M_a, swaps a and 0: M_a(z) = (a - z) / (1 - conj(a) z)
DiskPoint mobius(DiskPoint a, DiskPoint z);

// max pairwise psh_distance; 0 for fewer than two points
double psh_diameter(const std::vector<DiskPoint>& pts);

// metric "addition" along a geodesic: (s + t) / (1 + s t)
double psh_add(double s, double t);

// inverse of psh_add in its first slot; clamped at 0
double psh_sub(double s, double t);

// point at psh distance d from `from` on the geodesic toward `to`
DiskPoint geodesic_point(DiskPoint from, DiskPoint to, double d);

EuclidDisk to_euclid(const DiskRegion& g);
DiskRegion region_from_euclid(const EuclidDisk& e);

bool region_contains(const DiskRegion& g, DiskPoint z);

// invariant area of D(., r): pi r^2 / (1 - r^2), center independent
double invariant_area(double r);

// Gauss-Legendre nodes and weights on [0, 1]
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/** Product quadrature on a region.  resolution = number of radial nodes,
 * 2 x resolution angular nodes.  Weights integrate dA (area) or
 * dA / (1-|z|^2)^2 (invariant). */
DiskGrid build_grid(const DiskRegion& g, int resolution, Measure measure);

/** Custom measure: density(z) dA. */
DiskGrid build_grid(const DiskRegion& g, int resolution, const RealFn& density);

// (1/n) sum of f over n equispaced points of the circle |z| = r; n >= 16
double circle_mean(const RealFn& f, double r, int n);

/** Five-point invariant Laplacian (1-|z|^2)^2 (f_xx + f_yy) / 4.
 * Stencil must stay inside the disk: |z| + h < 1. */
double invariant_laplacian_fd(const RealFn& f, DiskPoint z, double h);

// default step 1e-4 * (1 - |z|^2)
double invariant_laplacian_fd(const RealFn& f, DiskPoint z);

}  // namespace bergman
