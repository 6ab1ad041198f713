#include <benchmark/benchmark.h>

#include <random>

#include "roadlpp/terrain.hpp"

namespace {

using namespace roadlpp;

terrain::ElevationGrid random_grid(std::int64_t n) {
  terrain::ElevationGrid grid;
  grid.ncols = n;
  grid.nrows = n;
  grid.cellsize = 1.0;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> height(0.0, 500.0);
  grid.heights.resize(static_cast<std::size_t>(n * n));
  for (double& h : grid.heights) h = height(rng);
  return grid;
}

void BM_ShortestPath(benchmark::State& state) {
  const std::int64_t n = state.range(0);
  const terrain::ElevationGrid grid = random_grid(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        terrain::shortest_path(grid, {0, 0}, {n - 1, n - 1}, 30.0, 8));
  }
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_ShortestPath)->RangeMultiplier(2)->Range(32, 256);

}  // namespace
