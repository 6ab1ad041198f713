#include <benchmark/benchmark.h>

#include "roadlpp/lattice.hpp"
#include "roadlpp/lpp.hpp"

namespace {

using namespace roadlpp;

void BM_LastPassageTime(benchmark::State& state) {
  const Coord n = state.range(0);
  const Region region({0, 0}, {n, n});
  const WeightField field = WeightField::sample(region, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lpp::last_passage_time(field, {0, 0}, {n, n}));
  }
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 1));
}
BENCHMARK(BM_LastPassageTime)->RangeMultiplier(2)->Range(64, 1024);

void BM_PassageProfile(benchmark::State& state) {
  const Coord n = state.range(0);
  const Region region({0, 0}, {n, n});
  const WeightField field = WeightField::sample(region, 7);
  for (auto _ : state) {
    lpp::PassageProfile profile(field, {n, n});
    benchmark::DoNotOptimize(profile.inclusive({0, 0}));
  }
  state.SetItemsProcessed(state.iterations() * (n + 1) * (n + 1));
}
BENCHMARK(BM_PassageProfile)->RangeMultiplier(2)->Range(64, 1024);

void BM_DirectedGeodesic(benchmark::State& state) {
  const double horizon = static_cast<double>(state.range(0));
  const Coord reach = static_cast<Coord>(horizon) + 2;
  const Region region({-2, -2}, {reach, reach});
  const WeightField field = WeightField::sample(region, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        lpp::directed_geodesic(field, {.start = {0, 0}, .theta = 1.0, .horizon = horizon}));
  }
}
BENCHMARK(BM_DirectedGeodesic)->RangeMultiplier(2)->Range(128, 1024);

}  // namespace

BENCHMARK_MAIN();
