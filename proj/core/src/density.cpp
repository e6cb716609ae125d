#include "bergman/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace bergman {

namespace {

constexpr int kCircleSamples = 2048;

double log_factor(double r) { return -std::log1p(-r * r); }

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("density: radius must lie in (0, 1)");
}

}  // namespace

double s_plain(const PointSet& z_set, double r) {
  check_radius(r);
  return k_hat(z_set, r) / log_factor(r);
}

double s_weighted(const PointSet& z_set, const Weight& phi, double r,
                  int circle_samples) {
  check_radius(r);
  return (k_hat(z_set, r) - weight_mean(phi, r, circle_samples)) / log_factor(r);
}

std::vector<double> default_r_grid() { return {0.90, 0.925, 0.95, 0.975, 0.995}; }

std::vector<DiskPoint> default_a_grid() {
  std::vector<DiskPoint> a_grid;
  const PointSet lattice = hyperbolic_lattice(0.3, 0.95);
  for (const auto& e : lattice.entries()) a_grid.push_back(e.point);
  return a_grid;
}

DensityReport s_uniform_estimate(const PointSet& z_set, const Weight& phi,
                                 const std::vector<double>& r_grid_in,
                                 const std::vector<DiskPoint>& a_grid_in,
                                 double r0) {
  if (r_grid_in.empty()) throw std::invalid_argument("density: empty radius grid");
  if (a_grid_in.empty()) throw std::invalid_argument("density: empty transport grid");
  std::vector<double> r_grid = r_grid_in;
  std::sort(r_grid.begin(), r_grid.end());
  for (double r : r_grid) check_radius(r);
  if (!(r0 < r_grid.back()))
    throw std::invalid_argument("density: r0 must sit below the top of the radius grid");

  DensityReport report;
  report.r0 = r0;
  report.r_grid = r_grid;

  // A truncated generator certifies S_{phi_a}(Z_a, r) only while D(a, r)
  // stays inside the truncation disk, i.e. r <= (rho - |a|)/(1 - |a| rho).
  // Transports whose cap falls below r0 are dropped; surviving cells clamp
  // their radius to the cap.
  std::vector<DiskPoint> a_grid;
  std::vector<double> caps;
  for (DiskPoint a : a_grid_in) {
    double cap = 1.0;
    if (z_set.truncation) {
      const double rho = *z_set.truncation;
      cap = a.abs() < rho ? psh_sub(rho, a.abs()) : 0.0;
      if (cap < r0) {
        report.truncation_capped = true;
        continue;
      }
      if (cap < r_grid.back()) report.truncation_capped = true;
    }
    a_grid.push_back(a);
    caps.push_back(cap);
  }
  if (a_grid.empty())
    throw std::invalid_argument("density: truncation radius leaves no usable transport");
  report.a_grid = a_grid;

  const int na = static_cast<int>(a_grid.size());
  const int nr = static_cast<int>(r_grid.size());
  report.values.assign(na, std::vector<double>(nr, 0.0));

  auto run_rows = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const PointSet moved = transform(z_set, a_grid[i]);
      // harmonic corrections drop out of circle means, so the plain pullback
      // weight has the same hat(phi) as the Green-normalized transport
      const Weight pulled = transport(phi, a_grid[i]);
      for (int j = 0; j < nr; ++j)
        report.values[i][j] =
            s_weighted(moved, pulled, std::min(r_grid[j], caps[i]), kCircleSamples);
    }
  };

  // workers own disjoint row stripes, so assembly order is deterministic
  const int workers =
      std::min<int>(na, std::max(1u, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    run_rows(0, na);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(run_rows, na * w / workers, na * (w + 1) / workers);
    for (auto& t : pool) t.join();
  }

  report.sup_per_r.assign(nr, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nr; ++j)
      report.sup_per_r[j] = std::max(report.sup_per_r[j], report.values[i][j]);

  report.estimate = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < nr; ++j)
    if (r_grid[j] >= r0) report.estimate = std::max(report.estimate, report.sup_per_r[j]);

  const int window = std::min(nr, std::max(2, (nr + 3) / 4));
  double wmax = -std::numeric_limits<double>::infinity();
  double wmin = std::numeric_limits<double>::infinity();
  for (int j = nr - window; j < nr; ++j) {
    wmax = std::max(wmax, report.sup_per_r[j]);
    wmin = std::min(wmin, report.sup_per_r[j]);
  }
  report.converged = (wmax - wmin) <= 0.02 * std::max(1.0, std::abs(wmax));
  return report;
}

double s_via_laplacian(const PointSet& z_set, const Weight& phi, double alpha,
                       DiskPoint a, double r, int grid_res) {
  check_radius(r);
  // the invariant Laplacian commutes with M_a, so the transported integrand
  // is the original one read off at M_a(w)
  auto integrand = [&](DiskPoint w) {
    const DiskPoint z = mobius(a, w);
    return k_laplacian(z_set, z) - phi.laplacian_at(z) - alpha;
  };
  return alpha + green_mean_of(integrand, r, grid_res) / log_factor(r);
}

double sigma_convolution(const RealFn& g, double r, DiskPoint a, int grid_res) {
  check_radius(r);
  auto pulled = [&](DiskPoint w) { return g(mobius(a, w)); };
  return green_mean_of(pulled, r, grid_res) / log_factor(r);
}

double tau_smoothing_gap(const RealFn& tau, double r,
                         const std::vector<DiskPoint>& probes, int grid_res) {
  double gap = 0.0;
  for (DiskPoint z : probes)
    gap = std::max(gap, std::abs(tau(z) - sigma_convolution(tau, r, z, grid_res)));
  return gap;
}

std::string DensityReport::to_csv() const {
  std::string out = "a_re,a_im,r,S_value\n";
  char line[160];
  for (std::size_t i = 0; i < a_grid.size(); ++i)
    for (std::size_t j = 0; j < r_grid.size(); ++j) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", a_grid[i].re,
                    a_grid[i].im, r_grid[j], values[i][j]);
      out += line;
    }
  return out;
}

std::string DensityReport::summary_json() const {
  nlohmann::json j;
  j["estimate"] = estimate;
  j["r0"] = r0;
  j["converged"] = converged;
  return j.dump(2);
}

}  // namespace bergman
