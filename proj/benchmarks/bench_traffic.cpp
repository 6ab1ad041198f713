#include <benchmark/benchmark.h>

#include "roadlpp/traffic.hpp"

namespace {

using namespace roadlpp;

void BM_CarsThroughPoint(benchmark::State& state) {
  traffic::TrafficConfig config;
  config.n_max = static_cast<int>(state.range(0));
  config.master_seed = 3;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    const traffic::TrafficScenario scenario = traffic::make_scenario(config, trial++);
    benchmark::DoNotOptimize(traffic::cars_through_point(scenario, {0, 0}));
  }
}
BENCHMARK(BM_CarsThroughPoint)->RangeMultiplier(2)->Range(4, 32)->Unit(benchmark::kMillisecond);

void BM_WeightFieldSample(benchmark::State& state) {
  const Coord n = state.range(0);
  const Region region({0, 0}, {n, n});
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(WeightField::sample(region, seed++));
  }
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 1));
}
BENCHMARK(BM_WeightFieldSample)->RangeMultiplier(4)->Range(64, 1024);

}  // namespace
