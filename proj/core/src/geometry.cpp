#include "bergman/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

DiskPoint::DiskPoint(double re_, double im_) : re(re_), im(im_) {
  if (re * re + im * im >= 1.0) throw std::domain_error("DiskPoint outside the open unit disk");
}

DiskPoint::DiskPoint(Complex z) : DiskPoint(z.real(), z.imag()) {}

double DiskPoint::abs() const { return std::sqrt(abs2()); }

DiskRegion::DiskRegion(DiskPoint center_, double radius_) : center(center_), radius(radius_) {
  require(radius > 0.0 && radius < 1.0, "DiskRegion radius must lie in (0, 1)");
}

double DiskGrid::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double psh_distance(DiskPoint z, DiskPoint w) {
  const Complex num = z.c() - w.c();
  const Complex den = 1.0 - std::conj(w.c()) * z.c();
  return std::abs(num) / std::abs(den);
}

DiskPoint mobius(DiskPoint a, DiskPoint z) {
  const Complex num = a.c() - z.c();
  const Complex den = 1.0 - std::conj(a.c()) * z.c();
  return DiskPoint(num / den);
}

double psh_diameter(const std::vector<DiskPoint>& pts) {
  double d = 0.0;
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, psh_distance(pts[i], pts[j]));
  return d;
}

double psh_add(double s, double t) { return (s + t) / (1.0 + s * t); }

double psh_sub(double s, double t) {
  const double v = (s - t) / (1.0 - s * t);
  return v > 0.0 ? v : 0.0;
}

DiskPoint geodesic_point(DiskPoint from, DiskPoint to, double d) {
  require(d >= 0.0 && d < 1.0, "geodesic_point: distance must lie in [0, 1)");
  const Complex q = mobius(from, to).c();  // `to` seen from `from`
  const double qa = std::abs(q);
  if (qa == 0.0) return from;
  const Complex step = d * q / qa;
  return mobius(from, DiskPoint(step));
}

EuclidDisk to_euclid(const DiskRegion& g) {
  const double r = g.radius;
  const double a2 = g.center.abs2();
  const double den = 1.0 - r * r * a2;
  return {g.center.c() * ((1.0 - r * r) / den), r * (1.0 - a2) / den};
}

DiskRegion region_from_euclid(const EuclidDisk& e) {
  const double ce = std::abs(e.center);
  require(ce + e.radius < 1.0, "region_from_euclid: disk must lie strictly inside the unit disk");
  require(e.radius > 0.0, "region_from_euclid: radius must be positive");
  if (ce == 0.0) return DiskRegion(DiskPoint(0.0, 0.0), e.radius);
  // the diameter through the origin is a geodesic; midpoint in the metric
  const double u = ce - e.radius;
  const double v = ce + e.radius;
  const double s = u + v;
  const double q = 1.0 + u * v;
  const double m = s / (q + std::sqrt(q * q - s * s));
  const DiskPoint center(e.center * (m / ce));
  const double rad = (v - m) / (1.0 - m * v);
  return DiskRegion(center, rad);
}

bool region_contains(const DiskRegion& g, DiskPoint z) {
  return psh_distance(g.center, z) < g.radius;
}

double invariant_area(double r) { return kPi * r * r / (1.0 - r * r); }

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_legendre: need n >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // roots of P_n on (-1,1) by Newton, then map to (0,1)
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = 0.5 * w;
    weights[n - 1 - i] = 0.5 * w;
  }
}

namespace {

DiskGrid build_grid_impl(const DiskRegion& g, int resolution, const RealFn& density) {
  require(resolution >= 4, "build_grid: resolution must be >= 4");
  const EuclidDisk e = to_euclid(g);
  const int nr = resolution;
  const int nt = 2 * resolution;
  std::vector<double> rho, wr;
  gauss_legendre(nr, rho, wr);
  DiskGrid grid;
  grid.nodes.reserve(static_cast<size_t>(nr) * nt);
  grid.weights.reserve(static_cast<size_t>(nr) * nt);
  const double dt = 2.0 * kPi / nt;
  for (int j = 0; j < nr; ++j) {
    const double r = rho[j] * e.radius;
    // dA = rho drho dtheta on the Euclidean realization
    const double wbase = wr[j] * e.radius * r * dt;
    for (int k = 0; k < nt; ++k) {
      const double th = dt * k;
      const DiskPoint z(e.center + Complex(r * std::cos(th), r * std::sin(th)));
      grid.nodes.push_back(z);
      grid.weights.push_back(wbase * density(z));
    }
  }
  return grid;
}

}  // namespace

DiskGrid build_grid(const DiskRegion& g, int resolution, Measure measure) {
  if (measure == Measure::area)
    return build_grid_impl(g, resolution, [](DiskPoint) { return 1.0; });
  return build_grid_impl(g, resolution, [](DiskPoint z) {
    const double t = 1.0 - z.abs2();
    return 1.0 / (t * t);
  });
}

DiskGrid build_grid(const DiskRegion& g, int resolution, const RealFn& density) {
  return build_grid_impl(g, resolution, density);
}

double circle_mean(const RealFn& f, double r, int n) {
  require(r > 0.0 && r < 1.0, "circle_mean: radius must lie in (0, 1)");
  require(n >= 16, "circle_mean: need n >= 16");
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    s += f(DiskPoint(r * std::cos(t), r * std::sin(t)));
  }
  return s / n;
}

double invariant_laplacian_fd(const RealFn& f, DiskPoint z, double h) {
  require(h > 0.0, "invariant_laplacian_fd: h must be positive");
  require(z.abs() + h < 1.0, "invariant_laplacian_fd: stencil leaves the disk");
  const double c = f(z);
  const double s = f(DiskPoint(z.re + h, z.im)) + f(DiskPoint(z.re - h, z.im)) +
                   f(DiskPoint(z.re, z.im + h)) + f(DiskPoint(z.re, z.im - h)) - 4.0 * c;
  const double t = 1.0 - z.abs2();
  return t * t * s / (4.0 * h * h);
}

double invariant_laplacian_fd(const RealFn& f, DiskPoint z) {
  return invariant_laplacian_fd(f, z, 1e-4 * (1.0 - z.abs2()));
}

}  // namespace bergman
