#include "bergman/products.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

// direct quotient f / Psi in log-polar form; valid anywhere off the set
Complex log_quotient(const AnalyticFn& f, const PointSet& z_set, DiskPoint w) {
  const ProductEvaluation psi = psi_eval(z_set, w);
  if (psi.at_zero)
    throw std::domain_error("divide_by_product: direct quotient hit a set point");
  const Complex fw = f(w);
  if (fw == Complex(0.0, 0.0)) return 0.0;
  const double lm = std::log(std::abs(fw)) - psi.log_modulus;
  return std::polar(std::exp(lm), std::arg(fw) - std::arg(psi.phase));
}

/** Taylor quotient around a set point: sample g = f/Psi on the boundary of
 * the pseudohyperbolic disk D(a, 0.75 sep), which is zero free, and expand in
 * the recentered Euclidean coordinate.  A genuine pole of f/Psi (f vanishing
 * short of the multiplicities) leaks into the negative Laurent coefficients,
 * which is the advertised diagnostic. */
Complex near_quotient(const AnalyticFn& f, const PointSet& z_set, DiskPoint a,
                      double sep, DiskPoint z) {
  const EuclidDisk circle = to_euclid(DiskRegion{a, 0.75 * sep});
  constexpr int n = 256, kmax = 64;
  std::vector<Complex> q(n);
  double scale = 1.0;
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * kPi * j / n;
    const Complex w = circle.center + circle.radius * std::polar(1.0, th);
    q[j] = log_quotient(f, z_set, DiskPoint(w.real(), w.imag()));
    scale = std::max(scale, std::abs(q[j]));
  }
  for (int neg = 1; neg <= 2; ++neg) {
    Complex c = 0.0;
    for (int j = 0; j < n; ++j)
      c += q[j] * std::polar(1.0, 2.0 * kPi * j * neg / n);
    if (std::abs(c) / n > 1e-7 * scale)
      throw std::domain_error(
          "divide_by_product: numerator does not vanish on the set to the "
          "required multiplicities");
  }
  const Complex zeta = (z.c() - circle.center) / circle.radius;
  Complex acc = 0.0;
  for (int k = kmax - 1; k >= 0; --k) {
    Complex c = 0.0;
    for (int j = 0; j < n; ++j)
      c += q[j] * std::polar(1.0, -2.0 * kPi * j * k / n);
    acc = acc * zeta + c / double(n);
  }
  return acc;
}

}  // namespace

Complex ProductEvaluation::value() const {
  if (at_zero) return 0.0;
  return std::exp(log_modulus) * phase;
}

ProductEvaluation psi_eval(const PointSet& z_set, DiskPoint z) {
  ProductEvaluation out;
  const Complex zc = z.c();
  Kahan lm, ang;
  for (const auto& e : z_set.entries()) {
    const Complex ac = e.point.c();
    out.terms_used += e.mult;
    if (ac == zc) {
      out.at_zero = true;
      break;
    }
    if (ac == Complex(0.0, 0.0)) {
      lm.add(e.mult * std::log(std::abs(zc)));
      ang.add(e.mult * std::arg(zc));
      continue;
    }
    const Complex w = std::conj(ac) * (ac - zc) / (1.0 - std::conj(ac) * zc);
    lm.add(e.mult * (std::log(std::abs(w)) + 1.0 - w.real()));
    ang.add(e.mult * (std::arg(w) - w.imag()));
  }
  if (out.at_zero) {
    out.log_modulus = -std::numeric_limits<double>::infinity();
    out.terms_used = z_set.total_count();
    return out;
  }
  out.log_modulus = lm.s;
  out.phase = std::polar(1.0, ang.s);
  return out;
}

double psi_at_zero(const PointSet& z_set, double delta) {
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("psi_at_zero: delta must lie in [0, 1)");
  Kahan lm;
  for (const auto& e : z_set.entries()) {
    const double r = e.point.abs();
    if (r == 0.0 || r < delta)
      throw std::domain_error("psi_at_zero: set meets the excluded disk about the origin");
    lm.add(e.mult * (2.0 * std::log(r) + 1.0 - r * r));
  }
  return std::exp(lm.s);
}

ZeroSetNormResult zero_space_norm(const AnalyticFn& big_f, const PointSet& z_set,
                                  const Weight& phi, double p, double alpha,
                                  int quad_res, double r_max) {
  if (!(p > 0.0)) throw std::invalid_argument("zero_space_norm: p must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("zero_space_norm: alpha must be positive");
  if (!(r_max > 0.0 && r_max < 1.0))
    throw std::invalid_argument("zero_space_norm: r_max must lie in (0, 1)");
  if (quad_res < 16) throw std::invalid_argument("zero_space_norm: quad_res must be >= 16");

  const int annuli = std::max(8, quad_res / 8);
  const int nr = 8;
  const int nt = std::max(64, 4 * quad_res);
  std::vector<double> gn, gw;
  gauss_legendre(nr, gn, gw);
  const double dt = 2.0 * kPi / nt;

  // annuli graded geometrically in 1 - r^2 resolve the boundary factor,
  // whose exponent alpha p - 1 may sit in (-1, 0)
  const double s_end = (1.0 - r_max) * (1.0 + r_max);
  double total = 0.0, outer = 0.0;
  for (int k = 0; k < annuli; ++k) {
    const double s_in = std::pow(s_end, double(k) / annuli);
    const double s_out = std::pow(s_end, double(k + 1) / annuli);
    const double r_in = std::sqrt(1.0 - s_in);
    const double r_out = std::sqrt(1.0 - s_out);
    double acc = 0.0;
    for (int j = 0; j < nr; ++j) {
      const double r = r_in + (r_out - r_in) * gn[j];
      double ring = 0.0;
      for (int i = 0; i < nt; ++i) {
        const double th = dt * (i + 0.5);
        const DiskPoint zp(r * std::cos(th), r * std::sin(th));
        const double af = std::abs(big_f(zp));
        if (af == 0.0) continue;
        const double lg = p * std::log(af) - p * phi.value_at(zp) +
                          p * k_function(z_set, zp) +
                          (alpha * p - 1.0) * std::log1p(-zp.abs2());
        ring += std::exp(lg);
      }
      acc += gw[j] * (r_out - r_in) * r * ring * dt;
    }
    total += acc;
    if (k == annuli - 1) outer = acc;
  }
  return {total, total > 0.0 ? outer / total : 0.0, r_max};
}

Complex divide_by_product(const AnalyticFn& f, const PointSet& z_set, DiskPoint z) {
  const auto& es = z_set.entries();
  int nearest = -1;
  double dist = 2.0;
  for (int i = 0; i < static_cast<int>(es.size()); ++i) {
    const double d = psh_distance(z, es[i].point);
    if (d < dist) {
      dist = d;
      nearest = i;
    }
  }
  if (nearest >= 0) {
    double sep = 0.5;
    for (int j = 0; j < static_cast<int>(es.size()); ++j)
      if (j != nearest)
        sep = std::min(sep, psh_distance(es[nearest].point, es[j].point));
    if (dist < 0.5 * sep) return near_quotient(f, z_set, es[nearest].point, sep, z);
  }
  return log_quotient(f, z_set, z);
}

}  // namespace bergman
