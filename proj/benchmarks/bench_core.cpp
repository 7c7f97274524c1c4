#include <benchmark/benchmark.h>

#include <numbers>

#include "kslab/grid.hpp"
#include "kslab/linsemi.hpp"
#include "kslab/norms.hpp"
#include "kslab/random.hpp"
#include "kslab/solver.hpp"

using namespace kslab;

namespace {

RealField random_field(const Grid& g, double corr = 1.0) {
  SplitRng rng(12345);
  return random_smooth_field(g, rng, corr, 1.0);
}

void BM_transform_roundtrip_1d(benchmark::State& state) {
  const Grid g = make_grid(1, 100.0, static_cast<int>(state.range(0)));
  const RealField f = random_field(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_transform(forward_transform(f)));
  }
}
BENCHMARK(BM_transform_roundtrip_1d)->Arg(1024)->Arg(4096);

void BM_transform_roundtrip_2d(benchmark::State& state) {
  const Grid g = make_grid(2, 100.0, static_cast<int>(state.range(0)));
  const RealField f = random_field(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(inverse_transform(forward_transform(f)));
  }
}
BENCHMARK(BM_transform_roundtrip_2d)->Arg(128)->Arg(256);

void BM_semigroup_apply(benchmark::State& state) {
  const Grid g = make_grid(1, 400.0, static_cast<int>(state.range(0)));
  const SemigroupSymbol sym(2.0, g);
  const RealField f = random_field(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_semigroup(sym, 0.5, f));
  }
}
BENCHMARK(BM_semigroup_apply)->Arg(1024)->Arg(4096);

void BM_perturbation_rhs(benchmark::State& state) {
  const Grid g = make_grid(1, 200.0, static_cast<int>(state.range(0)));
  const RealField f = random_field(g, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(perturbation_rhs(2.0, f));
  }
}
BENCHMARK(BM_perturbation_rhs)->Arg(1024)->Arg(4096);

void BM_etd_steps(benchmark::State& state) {
  const Grid g = make_grid(1, 200.0, 1024);
  RealField v0 = random_field(g, 2.0);
  for (auto& v : v0.values) v *= 0.01;
  SolverConfig cfg;
  cfg.A = 2.0;
  cfg.horizon = static_cast<double>(state.range(0)) * 0.005;
  cfg.dt = 0.005;
  cfg.record_stride = 1 << 28;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve(v0, cfg));
  }
}
BENCHMARK(BM_etd_steps)->Arg(10)->Arg(100);

void BM_uloc_norm(benchmark::State& state) {
  const Grid g = make_grid(1, 32.0, static_cast<int>(state.range(0)));
  const RealField f = random_field(g, 0.5);
  const NormSpec spec{2.0, 1.0, WindowShape::ball, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(uloc_norm(f, spec));
  }
}
BENCHMARK(BM_uloc_norm)->Arg(512)->Arg(2048);

}  // namespace

BENCHMARK_MAIN();
