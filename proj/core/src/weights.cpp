#include "bergman/weights.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bergman {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTruncation = 0.995;  // Moebius-centered working radius

double log_inv(DiskPoint z) { return std::log(1.0 / (1.0 - z.abs2())); }

std::vector<double> split(const std::string& s, char sep, std::vector<std::string>& parts) {
  parts.clear();
  size_t pos = 0;
  while (true) {
    const size_t next = s.find(sep, pos);
    parts.push_back(s.substr(pos, next == std::string::npos ? next : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  std::vector<double> vals;
  for (size_t i = 1; i < parts.size(); ++i) {
    size_t used = 0;
    vals.push_back(std::stod(parts[i], &used));
    if (used != parts[i].size()) throw std::invalid_argument("weight spec: bad number " + parts[i]);
  }
  return vals;
}

}  // namespace

double Weight::laplacian_at(DiskPoint z) const {
  if (laplacian) return laplacian(z);
  return invariant_laplacian_fd(value, z);
}

Weight standard_weight(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("standard_weight: alpha must be positive");
  Weight w;
  w.value = log_inv;
  if (alpha != 1.0) w.value = [alpha](DiskPoint z) { return alpha * log_inv(z); };
  w.laplacian = [alpha](DiskPoint) { return alpha; };
  w.m = w.M = alpha;
  w.spec = "standard:" + std::to_string(alpha);
  return w;
}

Weight perturbed_standard_weight(double alpha, double amplitude) {
  if (!(alpha > 0.0)) throw std::invalid_argument("perturbed_standard_weight: alpha must be positive");
  Weight w;
  w.value = [alpha, amplitude](DiskPoint z) {
    return alpha * log_inv(z) + amplitude * (z.re * z.re - z.im * z.im);
  };
  // Re(z^2) is harmonic, the Laplacian is untouched
  w.laplacian = [alpha](DiskPoint) { return alpha; };
  w.m = w.M = alpha;
  w.spec = "perturbed-standard:" + std::to_string(alpha) + ":" + std::to_string(amplitude);
  return w;
}

Weight parse_weight_spec(const std::string& spec) {
  std::vector<std::string> parts;
  const std::vector<double> vals = split(spec, ':', parts);
  if (parts.empty()) throw std::invalid_argument("empty weight spec");
  if (parts[0] == "standard") {
    if (vals.size() != 1) throw std::invalid_argument("weight spec: standard:<alpha>");
    return standard_weight(vals[0]);
  }
  if (parts[0] == "perturbed-standard") {
    if (vals.size() != 2)
      throw std::invalid_argument("weight spec: perturbed-standard:<alpha>:<amplitude>");
    return perturbed_standard_weight(vals[0], vals[1]);
  }
  throw std::invalid_argument("unknown weight preset: " + parts[0]);
}

NormalizedWeight alpha_shift(const Weight& phi, double alpha) {
  NormalizedWeight t;
  const RealFn value = phi.value;
  t.value = [value, alpha](DiskPoint z) { return value(z) - alpha * log_inv(z); };
  if (phi.laplacian) {
    const RealFn lap = phi.laplacian;
    t.laplacian = [lap, alpha](DiskPoint z) { return lap(z) - alpha; };
  }
  t.alpha = alpha;
  t.lower = phi.m - alpha;
  t.upper = phi.M - alpha;
  return t;
}

double weight_mean(const RealFn& phi, double r, int n) {
  return circle_mean(phi, r, n) - phi(DiskPoint(0.0, 0.0));
}

double weight_mean(const Weight& phi, double r, int n) { return weight_mean(phi.value, r, n); }

double green_mean_of(const RealFn& lap, double r, int grid_res) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("green_mean: r must lie in (0, 1)");
  if (grid_res < 4) throw std::invalid_argument("green_mean: grid_res must be >= 4");
  // rho = r t^2 grading resolves the integrable log factor at the origin
  std::vector<double> tn, tw;
  gauss_legendre(grid_res, tn, tw);
  const int nt = 2 * grid_res;
  const double dt = 2.0 * kPi / nt;
  double sum = 0.0;
  for (int j = 0; j < grid_res; ++j) {
    const double t = tn[j];
    const double rho = r * t * t;
    const double one = 1.0 - rho * rho;
    const double radial = tw[j] * (-4.0 * std::log(t)) * 2.0 * r * r * t * t * t / (one * one);
    double ang = 0.0;
    for (int k = 0; k < nt; ++k) {
      const double th = dt * k;
      ang += lap(DiskPoint(rho * std::cos(th), rho * std::sin(th)));
    }
    sum += radial * ang * dt;
  }
  return sum / kPi;
}

double green_mean(const Weight& phi, double r, int grid_res) {
  return green_mean_of([&phi](DiskPoint z) { return phi.laplacian_at(z); }, r, grid_res);
}

double log_weight_smoothing_gap(double r, int grid_res) {
  const double big_l = std::log(1.0 / (1.0 - r * r));
  return green_mean_of(log_inv, r, grid_res) / big_l;
}

GreenPotential::GreenPotential(const Weight& phi, DiskPoint a, int grid_res)
    : a_(a), rho_t_(kTruncation), m_big_(phi.M) {
  if (grid_res < 8) throw std::invalid_argument("green_potential: grid_res must be >= 8");
  const RealFn value = phi.value;
  const DiskPoint aa = a_;
  phi_centered_ = [value, aa](DiskPoint w) { return value(mobius(aa, w)); };

  // node count keeps (|w|/rho_t)^nc negligible on the sampling range below
  const int nc = std::max(2048, 32 * grid_res);
  boundary_.resize(nc);
  for (int j = 0; j < nc; ++j) {
    const double th = 2.0 * kPi * j / nc;
    boundary_[j] = phi_centered_(DiskPoint(rho_t_ * std::cos(th), rho_t_ * std::sin(th)));
  }

  // sampled minimum of V = phi_a - P[phi_a]; V <= 0 when phi is subharmonic
  double vmin = phi_centered_(DiskPoint(0, 0)) - poisson(DiskPoint(0, 0));
  std::vector<double> rn, rw;
  gauss_legendre(grid_res, rn, rw);
  const int na = 2 * grid_res;
  for (int j = 0; j < grid_res; ++j) {
    const double rho = rn[j] * 0.985 * rho_t_;
    for (int k = 0; k < na; ++k) {
      const double th = 2.0 * kPi * (k + 0.5 * (j % 2)) / na;
      const DiskPoint w(rho * std::cos(th), rho * std::sin(th));
      vmin = std::min(vmin, phi_centered_(w) - poisson(w));
    }
  }
  min_shift_ = vmin;

  // interior consistency of the Laplacian
  lap_err_ = 0.0;
  for (const DiskPoint w : {DiskPoint(0.0, 0.0), DiskPoint(0.45, 0.2), DiskPoint(-0.3, 0.55),
                            DiskPoint(0.1, -0.65)}) {
    const double want = phi.laplacian_at(mobius(a_, w));
    const double got =
        invariant_laplacian_fd([this](DiskPoint q) { return centered(q); }, w, 2e-4 * (1.0 - w.abs2()));
    lap_err_ = std::max(lap_err_, std::abs(got - want));
  }
  lap_ok_ = lap_err_ <= 1e-3 * std::max(1.0, m_big_);
}

double GreenPotential::poisson(DiskPoint w) const {
  const int nc = static_cast<int>(boundary_.size());
  const Complex z = w.c();
  double s = 0.0;
  for (int j = 0; j < nc; ++j) {
    const double th = 2.0 * kPi * j / nc;
    const Complex zeta(rho_t_ * std::cos(th), rho_t_ * std::sin(th));
    s += boundary_[j] * ((zeta + z) / (zeta - z)).real();
  }
  return s / nc;
}

double GreenPotential::centered(DiskPoint w) const {
  if (w.abs() > rho_t_)
    throw std::domain_error("GreenPotential: point outside the truncated working disk");
  return phi_centered_(w) - poisson(w) - min_shift_;
}

double GreenPotential::operator()(DiskPoint z) const { return centered(mobius(a_, z)); }

double GreenPotential::at_center() const {
  // centered(0), written out: the Poisson kernel at 0 is the plain mean
  double mean = 0.0;
  for (double b : boundary_) mean += b;
  mean /= static_cast<double>(boundary_.size());
  return phi_centered_(DiskPoint(0, 0)) - mean - min_shift_;
}

double GreenPotential::c_report() const { return m_big_ > 0.0 ? at_center() / m_big_ : 0.0; }

GreenPotential green_potential(const Weight& phi, DiskPoint a, int grid_res) {
  return GreenPotential(phi, a, grid_res);
}

Weight transport(const Weight& phi, DiskPoint a) {
  Weight w;
  const RealFn value = phi.value;
  w.value = [value, a](DiskPoint z) { return value(mobius(a, z)); };
  if (phi.laplacian) {
    const RealFn lap = phi.laplacian;
    w.laplacian = [lap, a](DiskPoint z) { return lap(mobius(a, z)); };
  }
  w.m = phi.m;
  w.M = phi.M;
  w.spec = phi.spec + "@" + std::to_string(a.re) + "," + std::to_string(a.im);
  return w;
}

}  // namespace bergman
