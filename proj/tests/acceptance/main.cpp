// Acceptance gate: ten end-to-end checks, one line each, exit 0 only when
// every check holds at its stated tolerance.  Oracles are closed forms,
// dimensional analysis and direction tests; nothing here reuses the code
// paths it is checking.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "bergman/analysis.hpp"
#include "bergman/density.hpp"
#include "bergman/geometry.hpp"
#include "bergman/products.hpp"
#include "bergman/schemes.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

namespace {

int failures = 0;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("%s %2d  %s  [%s]\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point from) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

const Weight kZeroWeight{[](DiskPoint) { return 0.0; },
                         [](DiskPoint) { return 0.0; }, 0.0, 0.0, "zero"};

PointSet random_set(std::mt19937& rng, int n, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DiskPoint> pts;
  for (int i = 0; i < n; ++i) {
    const double r = rmax * std::sqrt(u(rng));
    const double t = 2.0 * M_PI * u(rng);
    pts.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return PointSet::of(pts);
}

PointSet separated_set(std::mt19937& rng, int n, double rmax, double min_sep) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PointEntry> es;
  while (static_cast<int>(es.size()) < n) {
    const double r = rmax * std::sqrt(u(rng));
    const double t = 2.0 * M_PI * u(rng);
    const DiskPoint cand(r * std::cos(t), r * std::sin(t));
    bool ok = true;
    for (const auto& e : es)
      if (psh_distance(cand, e.point) < min_sep) ok = false;
    if (ok) es.push_back({cand, 1});
  }
  return PointSet(std::move(es));
}

// sparse seeds with tight satellite points, so clusters actually form
PointSet clustered_set(std::mt19937& rng, int n_seeds) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<DiskPoint> seeds;
  while (static_cast<int>(seeds.size()) < n_seeds) {
    const double r = 0.85 * std::sqrt(u(rng));
    const double t = 2.0 * M_PI * u(rng);
    const DiskPoint cand(r * std::cos(t), r * std::sin(t));
    bool ok = true;
    for (const DiskPoint& s : seeds)
      if (psh_distance(cand, s) < 0.35) ok = false;
    if (ok) seeds.push_back(cand);
  }
  std::vector<PointEntry> es;
  for (const DiskPoint& s : seeds) {
    es.push_back({s, 1});
    const int extra = static_cast<int>(u(rng) * 3.0);
    for (int i = 0; i < extra; ++i) {
      const double t = 2.0 * M_PI * u(rng);
      const double d = 0.01 + 0.03 * u(rng);
      es.push_back({DiskPoint(s.re + d * std::cos(t), s.im + d * std::sin(t)), 1});
    }
  }
  return PointSet(std::move(es));
}

void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(9101);
  std::uniform_int_distribution<int> size(1, 50);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const PointSet z = random_set(rng, size(rng), 0.95);
    const RealFn kz = [&](DiskPoint p) { return k_function(z, p); };
    for (double r : {0.3, 0.6, 0.9})
      worst = std::max(worst, std::abs(weight_mean(kz, r, 4096) - k_hat(z, r)));
  }
  const double dt = seconds(start);
  report(1, "circle means of the point kernel match the closed form",
         worst < 1e-8 && dt < 5.0, fmt("max err %.2e, %.2f s", worst, dt));
}

void criterion_2() {
  double worst = 0.0;
  const RealFn one = [](DiskPoint) { return 1.0; };
  for (double r : {0.5, 0.7, 0.9})
    worst = std::max(worst,
                     std::abs(green_mean_of(one, r, 128) + std::log1p(-r * r)));
  report(2, "logarithmic mass over a metric disk integrates exactly", worst < 1e-4,
         fmt("max err %.2e", worst));
}

void criterion_3() {
  std::mt19937 rng(9103);
  const Weight phi = standard_weight(1.0);
  double worst = 0.0;
  for (const PointSet& z : {random_set(rng, 8, 0.7), random_set(rng, 12, 0.6)})
    for (DiskPoint a : {DiskPoint(0, 0), DiskPoint(0.4, 0.2)})
      for (double r : {0.7, 0.9}) {
        const double mean = s_weighted(transform(z, a), transport(phi, a), r);
        const double lap = s_via_laplacian(z, phi, 1.0, a, r, 128);
        worst = std::max(worst, std::abs(mean - lap));
      }
  report(3, "mean and Laplacian density routes agree", worst < 1e-3,
         fmt("max gap %.2e", worst));
}

void criterion_4() {
  double worst = 0.0;
  for (double m : {0.5, 1.0, 2.5})
    for (double r : default_r_grid())
      worst = std::max(worst, std::abs(s_weighted(PointSet(), standard_weight(m), r) + m));
  report(4, "empty-set density is minus the curvature level", worst < 1e-10,
         fmt("max err %.2e", worst));
}

void criterion_5() {
  std::mt19937 rng(9105);
  bool all_pass = true;
  bool never_worse = true;
  for (int trial = 0; trial < 100; ++trial) {
    const PointSet z = clustered_set(rng, 3 + trial % 6);
    const InterpolationScheme scheme = build_scheme(z, 0.1, 0.05);
    const AdmissibilityReport rep = check_admissible(scheme);
    all_pass = all_pass && rep.pass();

    // drop every third pair, thin the rest to their first entry
    std::vector<std::optional<PointSet>> keep;
    for (std::size_t k = 0; k < scheme.pairs.size(); ++k) {
      if (k % 3 == 2) {
        keep.emplace_back(std::nullopt);
      } else if (scheme.pairs[k].cluster.distinct_count() > 1) {
        keep.emplace_back(
            PointSet(std::vector<PointEntry>{scheme.pairs[k].cluster.entries().front()}));
      } else {
        keep.emplace_back(scheme.pairs[k].cluster);
      }
    }
    const AdmissibilityReport sub = check_admissible(subscheme(scheme, keep));
    never_worse = never_worse && sub.pass() && sub.r_star <= rep.r_star &&
                  sub.eps_star >= rep.eps_star && sub.delta_star >= rep.delta_star &&
                  sub.b_star <= rep.b_star;
  }
  report(5, "built schemes audit admissible; subschemes never worsen",
         all_pass && never_worse,
         fmt("100 builds pass=%d, subscheme monotone=%d", all_pass, never_worse));
}

void criterion_6() {
  std::mt19937 rng(9106);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const Weight phi = standard_weight(1.0);
  double worst_excess = -1.0;  // (lhs - rhs) / rhs, negative when comfortably under
  for (int s = 0; s < 5; ++s) {
    const PointSet z = separated_set(rng, 3 + s, 0.8, 0.2);
    const InterpolationScheme scheme = build_scheme(z, 0.2, 0.05);
    for (int t = 0; t < 10; ++t) {
      std::vector<Complex> cs(7);
      for (Complex& c : cs) c = Complex(coef(rng), coef(rng));
      const AnalyticFn f = [&cs](DiskPoint p) {
        Complex acc(0, 0);
        for (std::size_t i = cs.size(); i-- > 0;) acc = acc * p.c() + cs[i];
        return acc;
      };
      const OperatorNormCheck chk = phi_operator_norm_check(scheme, f, phi, 2.0, 1.0);
      worst_excess = std::max(worst_excess, (chk.lhs - chk.rhs) / chk.rhs);
    }
  }
  report(6, "summed coset norms stay under the overlap bound", worst_excess <= 1e-8,
         fmt("worst relative excess %.2e over 50 runs", worst_excess));
}

void criterion_7() {
  std::mt19937 rng(9107);
  const PointSet z = separated_set(rng, 100, 0.93, 0.1);
  const AnalyticFn g = [](DiskPoint p) {
    const Complex w = p.c();
    return Complex(0.8, 0.1) + w + Complex(-0.3, 0.2) * w * w + 0.1 * w * w * w;
  };
  const AnalyticFn f = [&](DiskPoint p) { return g(p) * psi_eval(z, p).value(); };
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  double worst = 0.0;
  for (int t = 0; t < 40; ++t) {
    const DiskPoint p(u(rng), u(rng));
    worst = std::max(worst, std::abs(divide_by_product(f, z, p) - g(p)) /
                                std::max(1.0, std::abs(g(p))));
  }
  const double closed = psi_at_zero(z);
  const double at0 = std::abs(psi_eval(z, DiskPoint(0, 0)).value());
  const double rel0 = std::abs(at0 - closed) / closed;
  report(7, "product division round-trips and its modulus at 0 is exact",
         worst < 1e-10 && rel0 < 1e-12,
         fmt("round-trip err %.2e (|Z|=100), center err %.2e", worst, rel0));
}

void criterion_8() {
  const auto start = std::chrono::steady_clock::now();
  const AnalyticFn data = [](DiskPoint z) {
    const double t = z.abs2() / (0.6 * 0.6);
    if (t >= 1.0) return Complex(0, 0);
    return Complex((1.0 - z.abs2()) * std::exp(1.0 - 1.0 / (1.0 - t)), 0.0);
  };
  const Weight phi = standard_weight(1.0);
  const PartitionOfUnity pou = partition_of_unity(0.992, 0.88, 0.8);
  const GridFunction f1 = sample_grid(data, 0.8 / 128, 0.8);
  const DbarSolution s1 = solve_dbar(f1, PointSet(), phi, 2.0, 1.0, 1, pou);
  const double t1 = seconds(start);
  const GridFunction f2 = sample_grid(data, 0.8 / 256, 0.8);
  const DbarSolution s2 = solve_dbar(f2, PointSet(), phi, 2.0, 1.0, 1, pou);
  report(8, "dbar residual is small and at least halves on refinement",
         s1.residual_rel < 1e-2 && s2.residual_rel <= 0.5 * s1.residual_rel && t1 < 60.0,
         fmt("residual %.2e -> %.2e (x%.1f), %.1f s at 257^2", s1.residual_rel,
             s2.residual_rel, s1.residual_rel / s2.residual_rel, t1));
}

void criterion_9() {
  double prev = 0.0;
  double worst_res = 0.0;
  bool monotone = true;
  bool strict_last = false;
  const std::vector<double> psis{0.5, 0.2, 0.1, 0.05};
  for (std::size_t i = 0; i < psis.size(); ++i) {
    const double psi = psis[i];
    const double t = (1.0 - std::sqrt(1.0 - psi * psi)) / psi;  // psh(-t, t) = psi
    const PointSet z = PointSet::of({DiskPoint(-t, 0), DiskPoint(t, 0)});
    const InterpolationScheme sch = build_scheme(z, 0.5 * psi, 0.2 * psi);
    std::vector<Jet> jets(2);
    jets[0].taylor = {{Complex(1.0, 0.0)}};
    jets[1].taylor = {{Complex(-1.0, 0.0)}};
    const InterpolationSolution sol = solve_interpolation(sch, jets, kZeroWeight, 2.0, 0.5);
    for (double r : sol.residuals) worst_res = std::max(worst_res, r);
    monotone = monotone && sol.K_estimate >= prev;
    if (i + 1 == psis.size()) strict_last = sol.K_estimate > prev;
    prev = sol.K_estimate;
  }
  report(9, "interpolant meets its jets; the constant grows as points merge",
         worst_res < 1e-9 && monotone && strict_last,
         fmt("max residual %.2e, final K %.3g", worst_res, prev));
}

void criterion_10() {
  const Weight phi = standard_weight(1.0);
  std::vector<DiskPoint> probes{DiskPoint(0, 0)};
  const PointSet probe_lattice = hyperbolic_lattice(0.5, 0.85);
  for (const auto& e : probe_lattice.entries()) probes.push_back(e.point);

  double prev = -1e300;
  bool increasing = true;
  bool directional = true;
  std::string ests;
  for (double spacing : {0.8, 0.5, 0.3}) {
    const PointSet lat = hyperbolic_lattice(spacing, 0.995);
    const double est = s_uniform_estimate(lat, phi, {0.9, 0.95}, probes, 0.9).estimate;
    increasing = increasing && est > prev;
    prev = est;
    ests += fmt("%s%.3g", ests.empty() ? "" : ", ", est);

    const GConstruction above = construct_g(DiskPoint(0, 0), lat, phi, est + 0.2, 0.1);
    const GConstruction below = construct_g(DiskPoint(0, 0), lat, phi, est - 0.2, 0.1);
    directional = directional && above.report.upper_ok && !below.report.upper_ok;
  }
  report(10, "density estimates order by spacing and gate the bound check",
         increasing && directional,
         fmt("estimates %s; pass above / fail below = %d", ests.c_str(), directional));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
