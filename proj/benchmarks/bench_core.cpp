#include <benchmark/benchmark.h>

#include "bergman/analysis.hpp"
#include "bergman/density.hpp"
#include "bergman/geometry.hpp"
#include "bergman/products.hpp"
#include "bergman/schemes.hpp"
#include "bergman/sequences.hpp"
#include "bergman/weights.hpp"

using namespace bergman;

static void BM_psh_distance(benchmark::State& state) {
  const DiskPoint z(0.31, -0.44), w(-0.52, 0.17);
  for (auto _ : state) benchmark::DoNotOptimize(psh_distance(z, w));
}
BENCHMARK(BM_psh_distance);

static void BM_build_grid_invariant(benchmark::State& state) {
  const DiskRegion g(DiskPoint(0.2, 0.1), 0.6);
  for (auto _ : state) {
    DiskGrid grid = build_grid(g, static_cast<int>(state.range(0)), Measure::invariant);
    benchmark::DoNotOptimize(grid.total());
  }
}
BENCHMARK(BM_build_grid_invariant)->Arg(16)->Arg(48);

static void BM_k_function(benchmark::State& state) {
  const PointSet z = hyperbolic_lattice(0.3, 0.95);
  const DiskPoint p(0.37, -0.22);
  for (auto _ : state) benchmark::DoNotOptimize(k_function(z, p));
}
BENCHMARK(BM_k_function);

static void BM_psi_eval(benchmark::State& state) {
  const PointSet z = hyperbolic_lattice(0.35, 0.9);
  const DiskPoint p(0.15, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(psi_eval(z, p).log_modulus);
}
BENCHMARK(BM_psi_eval);

static void BM_s_weighted(benchmark::State& state) {
  const PointSet z = hyperbolic_lattice(0.5, 0.9);
  const Weight phi = standard_weight(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(s_weighted(z, phi, 0.9));
}
BENCHMARK(BM_s_weighted)->Unit(benchmark::kMillisecond);

static void BM_green_potential(benchmark::State& state) {
  const Weight phi = standard_weight(1.0);
  for (auto _ : state) {
    GreenPotential tau(phi, DiskPoint(0.2, -0.1), static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(tau.at_center());
  }
}
BENCHMARK(BM_green_potential)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_coset_norm(benchmark::State& state) {
  const DiskRegion region(DiskPoint(0.3, 0.1), 0.25);
  const PointSet cluster = PointSet::of({DiskPoint(0.3, 0.1)});
  Jet jet;
  jet.taylor = {{Complex(1.0, 0.0)}};
  const Weight phi = standard_weight(1.0);
  for (auto _ : state) {
    const CosetNormResult r = coset_norm(region, cluster, jet, phi, 2.0, 1.0, 16, 24);
    benchmark::DoNotOptimize(r.norm);
  }
}
BENCHMARK(BM_coset_norm)->Unit(benchmark::kMillisecond);

static void BM_solve_dbar(benchmark::State& state) {
  const int half = static_cast<int>(state.range(0)) / 2;
  const GridFunction f = sample_grid(
      [](DiskPoint z) {
        const double t = z.abs2() / 0.36;
        if (t >= 1.0) return Complex(0, 0);
        return Complex((1.0 - z.abs2()) * std::exp(1.0 - 1.0 / (1.0 - t)), 0.0);
      },
      0.8 / half, 0.8);
  const Weight phi = standard_weight(1.0);
  const PartitionOfUnity pou = partition_of_unity(0.992, 0.88, 0.8);
  for (auto _ : state) {
    const DbarSolution s = solve_dbar(f, PointSet(), phi, 2.0, 1.0, 1, pou);
    benchmark::DoNotOptimize(s.residual_rel);
  }
}
BENCHMARK(BM_solve_dbar)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
