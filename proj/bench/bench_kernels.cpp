// Serial reference implementations against the OpenMP kernels.
// The threads argument is the OpenMP team size; 0 means all cores.

#include <omp.h>

#include <benchmark/benchmark.h>

#include "kzoom/analysis.hpp"

namespace {

using namespace kzoom;
using namespace kzoom::analysis;

HistogramConfig histogram_config() {
  HistogramConfig c;
  c.k = 4;
  c.seeds = 16;
  c.samples = 20'000;
  c.bins = 100;
  return c;
}

BifurcationConfig bifurcation_config() {
  BifurcationConfig c;
  c.mu_steps = 64;
  c.iters = 5'000;
  c.x_bins = 200;
  return c;
}

BatterySweepConfig battery_config() {
  BatterySweepConfig c;
  c.k = 4;
  c.seeds = 8;
  c.bits = 64'000;
  return c;
}

CipherDistConfig cipher_config() {
  CipherDistConfig c;
  c.key_template = keygen(kDefaultMasterSeed);
  c.plaintexts = 8;
  c.letters = 100;
  c.include_baseline = false;
  return c;
}

int team(const benchmark::State& state) {
  int t = static_cast<int>(state.range(0));
  return t > 0 ? t : omp_get_max_threads();
}

void BM_HistogramReference(benchmark::State& state) {
  auto c = histogram_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::histogram_experiment(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.seeds * c.samples));
}

void BM_HistogramParallel(benchmark::State& state) {
  auto c = histogram_config();
  for (auto _ : state) benchmark::DoNotOptimize(histogram_experiment(c, team(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.seeds * c.samples));
}

void BM_BifurcationReference(benchmark::State& state) {
  auto c = bifurcation_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::bifurcation_grid(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.mu_steps * c.iters));
}

void BM_BifurcationParallel(benchmark::State& state) {
  auto c = bifurcation_config();
  for (auto _ : state) benchmark::DoNotOptimize(bifurcation_grid(c, team(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.mu_steps * c.iters));
}

void BM_BatteryReference(benchmark::State& state) {
  auto c = battery_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::battery_sweep(c));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(c.seeds * c.bits / 8));
}

void BM_BatteryParallel(benchmark::State& state) {
  auto c = battery_config();
  for (auto _ : state) benchmark::DoNotOptimize(battery_sweep(c, team(state)));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(c.seeds * c.bits / 8));
}

void BM_CipherDistReference(benchmark::State& state) {
  auto c = cipher_config();
  for (auto _ : state) benchmark::DoNotOptimize(reference::cipher_distribution_experiment(c));
}

void BM_CipherDistParallel(benchmark::State& state) {
  auto c = cipher_config();
  for (auto _ : state) benchmark::DoNotOptimize(cipher_distribution_experiment(c, team(state)));
}

}  // namespace

BENCHMARK(BM_HistogramReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_HistogramParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BifurcationReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BifurcationParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatteryReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatteryParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CipherDistReference)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CipherDistParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
