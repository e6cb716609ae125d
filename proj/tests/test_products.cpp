#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/products.hpp"

using namespace bergman;

namespace {

// points kept pseudohyperbolically apart so local rules have room
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

const Weight kZeroWeight{[](DiskPoint) { return 0.0; },
                         [](DiskPoint) { return 0.0; }, 0.0, 0.0, "zero"};

const AnalyticFn kOne = [](DiskPoint) { return Complex(1.0, 0.0); };

}  // namespace

TEST_SUITE("products") {

TEST_CASE("psi_eval: empty product, pure monomial, exact zeros") {
  const auto empty = psi_eval(PointSet(), DiskPoint(0.3, -0.6));
  CHECK(empty.log_modulus == 0.0);
  CHECK(empty.value() == Complex(1.0, 0.0));
  CHECK(empty.terms_used == 0);

  const PointSet origin = PointSet::of({DiskPoint(0, 0)});
  for (DiskPoint z : {DiskPoint(0.4, 0.0), DiskPoint(-0.2, 0.55)})
    CHECK(std::abs(psi_eval(origin, z).value() - z.c()) < 1e-15);
  CHECK(psi_eval(origin, DiskPoint(0, 0)).at_zero);

  const PointSet one = PointSet::of({DiskPoint(0.3, 0.4)});
  const auto hit = psi_eval(one, DiskPoint(0.3, 0.4));
  CHECK(hit.at_zero);
  CHECK(hit.value() == Complex(0.0, 0.0));
}

TEST_CASE("psi_eval agrees with the direct complex product on small sets") {
  std::mt19937 rng(5001);
  const PointSet z_set = separated_set(rng, 5, 0.8, 0.2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < 25; ++t) {
    const DiskPoint z(u(rng), u(rng));
    Complex direct = 1.0;
    for (const auto& e : z_set.entries()) {
      const Complex a = e.point.c();
      const Complex w = std::conj(a) * (a - z.c()) / (1.0 - std::conj(a) * z.c());
      for (int k = 0; k < e.mult; ++k) direct *= w * std::exp(1.0 - w);
    }
    const Complex via_log = psi_eval(z_set, z).value();
    CHECK(std::abs(via_log - direct) < 1e-13 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("psi_eval: multiplicity squares the factor") {
  const PointSet single = PointSet::of({DiskPoint(0.5, -0.2)});
  const PointSet twice(std::vector<PointEntry>{{DiskPoint(0.5, -0.2), 2}});
  const DiskPoint z(0.1, 0.3);
  const Complex v1 = psi_eval(single, z).value();
  const Complex v2 = psi_eval(twice, z).value();
  CHECK(std::abs(v2 - v1 * v1) < 1e-14);
  CHECK(psi_eval(twice, z).terms_used == 2);
}

TEST_CASE("psi_eval stays finite and nonzero away from huge sets") {
  const PointSet big = hyperbolic_lattice(0.2, 0.97);
  REQUIRE(big.total_count() > 500);
  const auto ev = psi_eval(big, DiskPoint(0.123, 0.456));
  CHECK(std::isfinite(ev.log_modulus));
  CHECK(std::abs(std::abs(ev.phase) - 1.0) < 1e-12);
}

TEST_CASE("psi_at_zero: frozen value, cross-check, guard disk") {
  CHECK(psi_at_zero(PointSet()) == 1.0);
  const PointSet half = PointSet::of({DiskPoint(std::sqrt(0.5), 0.0)});
  CHECK(psi_at_zero(half) == doctest::Approx(0.8243606353500641).epsilon(1e-14));

  std::mt19937 rng(5002);
  const PointSet z_set = separated_set(rng, 12, 0.9, 0.1);
  CHECK(psi_at_zero(z_set) ==
        doctest::Approx(std::exp(psi_eval(z_set, DiskPoint(0, 0)).log_modulus))
            .epsilon(1e-12));

  CHECK_THROWS_AS(psi_at_zero(PointSet::of({DiskPoint(0, 0)})), std::domain_error);
  CHECK_THROWS_AS(psi_at_zero(PointSet::of({DiskPoint(0.05, 0.0)}), 0.1),
                  std::domain_error);
  CHECK_THROWS_AS(psi_at_zero(PointSet(), -0.5), std::invalid_argument);
}

TEST_CASE("zero_space_norm: closed form for the bare boundary factor") {
  // Z empty, phi = 0, F = 1: (pi/(alpha p)) (1 - (1-r_max^2)^{alpha p})
  const auto n2 = zero_space_norm(kOne, PointSet(), kZeroWeight, 2.0, 1.0, 96, 0.999);
  CHECK(n2.value == doctest::Approx(1.570790049891204).epsilon(1e-8));
  CHECK(n2.r_max == 0.999);
  CHECK(n2.outer_share > 0.0);
  CHECK(n2.outer_share < 0.05);

  // alpha p < 1 puts the exponent in (-1, 0); the graded annuli must cope
  const auto n03 = zero_space_norm(kOne, PointSet(), kZeroWeight, 1.0, 0.3, 96, 0.999);
  CHECK(n03.value == doctest::Approx(8.849147646975195).epsilon(1e-6));
}

TEST_CASE("zero_space_norm: zero numerator, monotone in the set") {
  const AnalyticFn zero = [](DiskPoint) { return Complex(0.0, 0.0); };
  CHECK(zero_space_norm(zero, PointSet(), kZeroWeight, 2.0, 1.0, 32, 0.99).value == 0.0);

  std::mt19937 rng(5003);
  const PointSet small = separated_set(rng, 4, 0.7, 0.2);
  std::vector<PointEntry> more = small.entries();
  more.push_back({DiskPoint(0.15, -0.62), 1});
  const PointSet big(std::move(more));
  const Weight phi = standard_weight(1.0);
  const double a = zero_space_norm(kOne, small, phi, 2.0, 1.0, 48, 0.99).value;
  const double b = zero_space_norm(kOne, big, phi, 2.0, 1.0, 48, 0.99).value;
  CHECK(b >= a);

  CHECK_THROWS_AS(zero_space_norm(kOne, small, phi, -1.0, 1.0, 48, 0.99),
                  std::invalid_argument);
  CHECK_THROWS_AS(zero_space_norm(kOne, small, phi, 2.0, 0.0, 48, 0.99),
                  std::invalid_argument);
  CHECK_THROWS_AS(zero_space_norm(kOne, small, phi, 2.0, 1.0, 48, 1.0),
                  std::invalid_argument);
}

TEST_CASE("correspondence integrand identity |f| = |g| |Psi| at random nodes") {
  std::mt19937 rng(5004);
  const PointSet z_set = separated_set(rng, 6, 0.75, 0.25);
  const AnalyticFn g = [](DiskPoint z) {
    return Complex(1.0, 0.0) + 0.5 * z.c() - Complex(0.0, 0.25) * z.c() * z.c();
  };
  std::uniform_real_distribution<double> u(-0.68, 0.68);
  for (int t = 0; t < 30; ++t) {
    const DiskPoint z(u(rng), u(rng));
    const auto psi = psi_eval(z_set, z);
    const double lhs = std::abs(g(z)) * std::exp(psi.log_modulus);
    const Complex f = g(z) * psi.value();
    CHECK(std::abs(f) == doctest::Approx(lhs).epsilon(1e-12));
  }
}

TEST_CASE("divide_by_product: monomial and self quotients") {
  const PointSet origin = PointSet::of({DiskPoint(0, 0)});
  const AnalyticFn ident = [](DiskPoint z) { return z.c(); };
  for (DiskPoint z : {DiskPoint(0, 0), DiskPoint(1e-3, 0.0), DiskPoint(0.3, -0.2)})
    CHECK(std::abs(divide_by_product(ident, origin, z) - 1.0) < 1e-12);

  std::mt19937 rng(5005);
  const PointSet z_set = separated_set(rng, 6, 0.8, 0.25);
  const AnalyticFn self = [&](DiskPoint z) { return psi_eval(z_set, z).value(); };
  for (DiskPoint z : {DiskPoint(0.1, 0.1), DiskPoint(-0.5, 0.3),
                      z_set.entries()[2].point, DiskPoint(0.72, -0.4)})
    CHECK(std::abs(divide_by_product(self, z_set, z) - 1.0) < 1e-10);
}

TEST_CASE("divide_by_product round trip recovers the cofactor") {
  std::mt19937 rng(5006);
  const PointSet z_set = separated_set(rng, 7, 0.8, 0.22);
  const AnalyticFn g = [](DiskPoint z) {
    const Complex w = z.c();
    return Complex(0.8, 0.1) + w + Complex(-0.3, 0.2) * w * w + 0.1 * w * w * w;
  };
  const AnalyticFn f = [&](DiskPoint z) { return g(z) * psi_eval(z_set, z).value(); };

  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int t = 0; t < 40; ++t) {
    const DiskPoint z(u(rng), u(rng));
    CHECK(std::abs(divide_by_product(f, z_set, z) - g(z)) <
          1e-10 * std::max(1.0, std::abs(g(z))));
  }
  // at and just off the zeros: the removable-singularity rule
  for (const auto& e : z_set.entries()) {
    CHECK(std::abs(divide_by_product(f, z_set, e.point) - g(e.point)) < 1e-9);
    const DiskPoint nudged(e.point.re + 1e-4, e.point.im - 1e-4);
    CHECK(std::abs(divide_by_product(f, z_set, nudged) - g(nudged)) < 1e-9);
  }
}

TEST_CASE("divide_by_product round trip with a double zero") {
  const PointSet z_set(std::vector<PointEntry>{{DiskPoint(0.4, 0.1), 2},
                                               {DiskPoint(-0.3, -0.5), 1}});
  const AnalyticFn g = [](DiskPoint z) { return Complex(1.0, 0.0) + 0.5 * z.c(); };
  const AnalyticFn f = [&](DiskPoint z) { return g(z) * psi_eval(z_set, z).value(); };
  for (DiskPoint z : {DiskPoint(0.4, 0.1), DiskPoint(0.41, 0.1), DiskPoint(0.0, 0.0)})
    CHECK(std::abs(divide_by_product(f, z_set, z) - g(z)) < 1e-9);
}

TEST_CASE("divide_by_product flags numerators that do not vanish") {
  const PointSet z_set = PointSet::of({DiskPoint(0.4, 0.0)});
  CHECK_THROWS_AS(divide_by_product(kOne, z_set, DiskPoint(0.4, 0.0)),
                  std::domain_error);
  CHECK_THROWS_AS(divide_by_product(kOne, z_set, DiskPoint(0.42, 0.01)),
                  std::domain_error);
  // a simple zero under a double point is still short
  const PointSet twice(std::vector<PointEntry>{{DiskPoint(0.4, 0.0), 2}});
  const AnalyticFn simple = [](DiskPoint z) { return z.c() - Complex(0.4, 0.0); };
  CHECK_THROWS_AS(divide_by_product(simple, twice, DiskPoint(0.4, 0.0)),
                  std::domain_error);
}

}  // TEST_SUITE
