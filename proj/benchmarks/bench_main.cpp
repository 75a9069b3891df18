#include <benchmark/benchmark.h>

#include <vector>

#include "bbmsel/engine.hpp"
#include "bbmsel/initial.hpp"
#include "bbmsel/kernels.hpp"
#include "bbmsel/levy.hpp"
#include "bbmsel/rng.hpp"
#include "bbmsel/selection.hpp"

using namespace bbmsel;

static void BM_ThetaSpectral(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::theta(x, 0.7));
    x += 1e-9;
  }
}
BENCHMARK(BM_ThetaSpectral);

static void BM_ThetaGaussian(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::theta(x, 0.05));
    x += 1e-9;
  }
}
BENCHMARK(BM_ThetaGaussian);

static void BM_PKilled(benchmark::State& state) {
  const kernels::IntervalParams iv(10.0);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::p_killed(3.0, 6.0, 20.0, iv));
}
BENCHMARK(BM_PKilled);

// One unit of time for the killed BBM from the metastable profile; items are particle-steps.
static void BM_AdvanceKilled(benchmark::State& state) {
  const double a = static_cast<double>(state.range(0));
  const kernels::IntervalParams iv(a);
  Rng init = rng_stream(1, 0, lanes::initial);
  const Population start = sample_initial_Hperp(2.0, iv, init);
  const AdvanceOptions opt{a * a / 400.0, 10'000'000, false};
  Rng rng = rng_stream(1, 0, lanes::dynamics);
  std::size_t steps = 0;
  for (auto _ : state) {
    Population pop = start;
    advance(pop, pop.time + 1.0, ReproductionLaw::binary(), {iv.mu(), {}}, {0.0, a}, opt, rng);
    steps += start.size() * static_cast<std::size_t>(1.0 / opt.dt);
    benchmark::DoNotOptimize(pop.particles.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(steps));
}
BENCHMARK(BM_AdvanceKilled)->Arg(10)->Arg(20);

static void BM_LevySample(benchmark::State& state) {
  const levy::LevySampler s;
  Rng rng = rng_stream(2, 0, lanes::levy);
  const double t = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(s.sample(t, rng));
}
BENCHMARK(BM_LevySample)->Arg(10)->Arg(100);

static void BM_MedAlpha(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = rng_stream(3, 0, lanes::aux);
  std::vector<double> xs(n);
  for (auto& x : xs) x = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(selection::med_alpha(xs, 0.5, static_cast<double>(n)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_MedAlpha)->Arg(1000)->Arg(10000);

static void BM_NbbmUnitTime(benchmark::State& state) {
  SimConfig cfg;
  cfg.N = state.range(0);
  cfg.horizon = 10.0;
  std::uint32_t rep = 0;
  for (auto _ : state) benchmark::DoNotOptimize(selection::run_nbbm(cfg, rep++).kills);
}
BENCHMARK(BM_NbbmUnitTime)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
