#include <benchmark/benchmark.h>

#include "bkf/kalman.hpp"
#include "bkf/rng.hpp"

namespace {

void BM_gain(benchmark::State& state) {
  bkf::Rng rng(42);
  bkf::NoiseSpec noise{0.8, 1.3, 0.25};
  double p = 1.0;
  for (auto _ : state) {
    p = 0.5 + 4.5 * rng.uniform();
    benchmark::DoNotOptimize(bkf::gain(p, noise));
  }
}
BENCHMARK(BM_gain);

void BM_behavioral_update(benchmark::State& state) {
  bkf::Rng rng(42);
  const bkf::BehavioralParams params{0.9, {0.8, 1.3, 0.25}};
  for (auto _ : state) {
    const bkf::StateEstimate prior{rng.normal(3.0, 1.0), 0.5 + 4.5 * rng.uniform()};
    const bkf::SignalVector signals{rng.normal(8.0, 2.0), rng.normal(8.0, 2.0)};
    benchmark::DoNotOptimize(bkf::behavioral_update(prior, signals, params));
  }
}
BENCHMARK(BM_behavioral_update);

}  // namespace

BENCHMARK_MAIN();
