#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "roadlpp/terrain.hpp"

using namespace roadlpp;
using terrain::Cell;
using terrain::ElevationGrid;

namespace {

ElevationGrid make_grid(std::int64_t nrows, std::int64_t ncols, std::vector<double> heights,
                        double cellsize = 1.0) {
  ElevationGrid g;
  g.nrows = nrows;
  g.ncols = ncols;
  g.cellsize = cellsize;
  g.heights = std::move(heights);
  return g;
}

/// Exhaustive minimum over simple paths; the independent oracle for Dijkstra.
double enumerate_min_cost(const ElevationGrid& g, Cell src, Cell dst, double delta,
                          int connectivity) {
  const double diag = delta * std::sqrt(2.0);
  std::vector<char> visited(static_cast<std::size_t>(g.nrows * g.ncols), 0);
  double best = std::numeric_limits<double>::infinity();
  auto walk = [&](auto&& self, Cell c, double cost) -> void {
    if (cost >= best) return;
    if (c == dst) {
      best = cost;
      return;
    }
    for (std::int64_t dr = -1; dr <= 1; ++dr)
      for (std::int64_t dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        if (connectivity == 4 && dr != 0 && dc != 0) continue;
        const Cell n{c.row + dr, c.col + dc};
        if (!g.in_bounds(n.row, n.col) || !g.passable(n.row, n.col)) continue;
        const std::size_t i = static_cast<std::size_t>(n.row * g.ncols + n.col);
        if (visited[i]) continue;
        visited[i] = 1;
        const bool diagonal = dr != 0 && dc != 0;
        self(self, n,
             cost + terrain::edge_weight(g.height(c.row, c.col), g.height(n.row, n.col),
                                         diagonal ? diag : delta));
        visited[i] = 0;
      }
  };
  visited[static_cast<std::size_t>(src.row * g.ncols + src.col)] = 1;
  walk(walk, src, 0.0);
  return best;
}

const char* kAsciiFixture =
    "ncols 3\n"
    "nrows 2\n"
    "xllcorner -3.5\n"
    "yllcorner 51.25\n"
    "cellsize 0.5\n"
    "NODATA_value -9999\n"
    "10 20 30\n"
    "40 -9999 60\n";

}  // namespace

TEST_CASE("ascii grid loading") {
  std::istringstream in(kAsciiFixture);
  const ElevationGrid g = terrain::load_ascii_grid(in);
  CHECK(g.ncols == 3);
  CHECK(g.nrows == 2);
  CHECK(g.xllcorner == -3.5);
  CHECK(g.cellsize == 0.5);
  CHECK(g.has_nodata);
  CHECK(g.height(0, 2) == 30);
  CHECK(g.passable(0, 0));
  CHECK_FALSE(g.passable(1, 1));
}

TEST_CASE("ascii grid errors carry context") {
  std::istringstream missing("ncols 2\nnrows 2\ncellsize 1\n1 2 3 4\n");
  CHECK_THROWS_WITH_AS(terrain::load_ascii_grid(missing),
                       doctest::Contains("missing mandatory header"), ParseError);
  std::istringstream bad_header("ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\nwidth 2\n1 2 3 4\n");
  CHECK_THROWS_WITH_AS(terrain::load_ascii_grid(bad_header), doctest::Contains("line 5"),
                       ParseError);
  std::istringstream short_data(
      "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n1 2 3\n");
  CHECK_THROWS_WITH_AS(terrain::load_ascii_grid(short_data),
                       doctest::Contains("expected 4 values"), ParseError);
}

TEST_CASE("ascii grid round trip") {
  std::istringstream in(kAsciiFixture);
  const ElevationGrid g = terrain::load_ascii_grid(in);
  std::ostringstream out;
  terrain::write_ascii_grid(g, out);
  std::istringstream back(out.str());
  const ElevationGrid h = terrain::load_ascii_grid(back);
  CHECK(g.heights == h.heights);
  CHECK(g.ncols == h.ncols);
  CHECK(g.nrows == h.nrows);
  CHECK(g.xllcorner == h.xllcorner);
  CHECK(g.yllcorner == h.yllcorner);
  CHECK(g.nodata_value == h.nodata_value);
}

TEST_CASE("edge weights") {
  CHECK(terrain::edge_weight(100, 100, 30) == 30);
  CHECK(terrain::edge_weight(0, 40, 30) == 50);
  CHECK(terrain::edge_weight(7, 7, 90 * std::sqrt(2.0)) == doctest::Approx(127.279).epsilon(1e-4));
  CHECK_THROWS_AS(terrain::edge_weight(0, 0, 0), DomainError);
}

TEST_CASE("flat grid closed form for every endpoint pair") {
  const ElevationGrid flat = make_grid(10, 10, std::vector<double>(100, 42.0));
  const double delta = 30;
  for (std::int64_t r1 = 0; r1 < 10; r1 += 3)
    for (std::int64_t c1 = 0; c1 < 10; c1 += 3)
      for (std::int64_t r2 = 0; r2 < 10; r2 += 2)
        for (std::int64_t c2 = 0; c2 < 10; c2 += 2) {
          const auto path = terrain::shortest_path(flat, {r1, c1}, {r2, c2}, delta, 4);
          CHECK(path.total_cost ==
                delta * static_cast<double>(std::llabs(r1 - r2) + std::llabs(c1 - c2)));
        }
}

TEST_CASE("ridge grid matches exhaustive enumeration") {
  // flat floor with an expensive ridge in column 2
  std::vector<double> h(16, 0.0);
  for (std::int64_t r = 0; r < 4; ++r) h[static_cast<std::size_t>(r * 4 + 2)] = 1000.0;
  const ElevationGrid ridge = make_grid(4, 4, h);
  for (int connectivity : {4, 8}) {
    const auto path = terrain::shortest_path(ridge, {0, 0}, {3, 3}, 30.0, connectivity);
    const double oracle = enumerate_min_cost(ridge, {0, 0}, {3, 3}, 30.0, connectivity);
    CHECK(path.total_cost == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("random small grids match exhaustive enumeration") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> height(0.0, 300.0);
  for (int iter = 0; iter < 25; ++iter) {
    std::vector<double> h(16);
    for (double& v : h) v = height(rng);
    const ElevationGrid g = make_grid(4, 4, h);
    for (int connectivity : {4, 8}) {
      const auto path = terrain::shortest_path(g, {0, 0}, {3, 3}, 25.0, connectivity);
      CHECK(path.total_cost ==
            doctest::Approx(enumerate_min_cost(g, {0, 0}, {3, 3}, 25.0, connectivity))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("path endpoints, symmetry, triangle inequality") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> height(0.0, 200.0);
  std::vector<double> h(36);
  for (double& v : h) v = height(rng);
  const ElevationGrid g = make_grid(6, 6, h);
  const Cell a{0, 0}, b{5, 2}, c{3, 5};
  const double ab = terrain::shortest_path(g, a, b, 20, 4).total_cost;
  const double ba = terrain::shortest_path(g, b, a, 20, 4).total_cost;
  const double ac = terrain::shortest_path(g, a, c, 20, 4).total_cost;
  const double bc = terrain::shortest_path(g, b, c, 20, 4).total_cost;
  CHECK(ab == doctest::Approx(ba).epsilon(1e-12));
  CHECK(ac <= ab + bc + 1e-9);
  const auto path = terrain::shortest_path(g, a, c, 20, 4);
  CHECK(path.cells.front() == a);
  CHECK(path.cells.back() == c);
  for (std::size_t i = 1; i < path.cells.size(); ++i) {
    const auto dr = std::llabs(path.cells[i].row - path.cells[i - 1].row);
    const auto dc = std::llabs(path.cells[i].col - path.cells[i - 1].col);
    CHECK(dr + dc == 1);  // 4-connectivity steps
  }
}

TEST_CASE("a larger delta straightens the chosen path") {
  // a tall ridge with a flat detour: cheap spacing favors the detour, wide
  // spacing favors climbing straight over
  std::vector<double> h(25, 0.0);
  for (std::int64_t r = 0; r < 4; ++r) h[static_cast<std::size_t>(r * 5 + 2)] = 120.0;
  const ElevationGrid g = make_grid(5, 5, h);
  std::size_t previous_cells = 0;
  double previous_climb = -1;
  bool first = true;
  for (double delta : {10.0, 30.0, 90.0}) {
    const auto path = terrain::shortest_path(g, {0, 0}, {0, 4}, delta, 4);
    double climb = 0;
    for (std::size_t i = 1; i < path.cells.size(); ++i)
      climb += std::abs(g.height(path.cells[i].row, path.cells[i].col) -
                        g.height(path.cells[i - 1].row, path.cells[i - 1].col));
    if (!first) {
      CHECK(path.cells.size() <= previous_cells);
      CHECK(climb >= previous_climb);
    }
    previous_cells = path.cells.size();
    previous_climb = climb;
    first = false;
  }
  // sanity: the smallest delta detours, the largest climbs straight over
  CHECK(terrain::shortest_path(g, {0, 0}, {0, 4}, 10.0, 4).cells.size() > 5);
  CHECK(terrain::shortest_path(g, {0, 0}, {0, 4}, 90.0, 4).cells.size() == 5);
}

TEST_CASE("nodata cells are barriers") {
  std::vector<double> h(9, 1.0);
  h[1] = -9999;
  h[4] = -9999;
  h[7] = -9999;  // a full wall in column 1
  ElevationGrid g = make_grid(3, 3, h);
  g.has_nodata = true;
  g.nodata_value = -9999;
  // every step, diagonal or not, lands on a cell: the wall blocks both modes
  CHECK_THROWS_AS(terrain::shortest_path(g, {0, 0}, {0, 2}, 10, 4), NoPathError);
  CHECK_THROWS_AS(terrain::shortest_path(g, {0, 0}, {0, 2}, 10, 8), NoPathError);
  CHECK_THROWS_AS(terrain::shortest_path(g, {0, 1}, {0, 2}, 10, 4), DomainError);
  // a gap in the wall opens it again, and 8-connectivity cuts the corner
  h[4] = 1.0;
  ElevationGrid open_grid = make_grid(3, 3, h);
  open_grid.has_nodata = true;
  open_grid.nodata_value = -9999;
  const auto four = terrain::shortest_path(open_grid, {0, 0}, {0, 2}, 10, 4);
  const auto eight = terrain::shortest_path(open_grid, {0, 0}, {0, 2}, 10, 8);
  CHECK(eight.cells.size() < four.cells.size());
}

TEST_CASE("geojson export") {
  ElevationGrid unit = make_grid(1, 1, {5.0});
  unit.xllcorner = 0;
  unit.yllcorner = 0;
  unit.cellsize = 1;
  terrain::TerrainPath single;
  single.cells = {{0, 0}};
  const std::string point = terrain::path_to_geojson(single, unit);
  CHECK(point.find("\"Point\"") != std::string::npos);
  CHECK(point.find("[0.5,0.5]") != std::string::npos);

  std::istringstream in(kAsciiFixture);
  const ElevationGrid g = terrain::load_ascii_grid(in);
  terrain::TerrainPath two;
  two.cells = {{0, 0}, {0, 1}};
  const std::string line = terrain::path_to_geojson(two, g);
  CHECK(line.find("\"LineString\"") != std::string::npos);
  // round trip through the center formula returns the same cells
  for (const Cell& c : two.cells) {
    const double lon = g.center_lon(c.col);
    const double lat = g.center_lat(c.row);
    CHECK(terrain::cell_from_latlon(g, lat, lon) == c);
  }
  terrain::TerrainPath empty;
  CHECK_THROWS_AS(terrain::path_to_geojson(empty, g), DomainError);
}

TEST_CASE("trace csv accumulates to the dijkstra cost") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> height(0.0, 100.0);
  std::vector<double> h(25);
  for (double& v : h) v = height(rng);
  const ElevationGrid g = make_grid(5, 5, h);
  const auto path = terrain::shortest_path(g, {0, 0}, {4, 4}, 15, 8);
  std::ostringstream out;
  terrain::path_to_csv(path, g, 15, out);
  const std::string text = out.str();
  CHECK(text.rfind("row,col,height,cum_cost\n", 0) == 0);
  const std::size_t last_comma = text.find_last_of(',');
  const double cum = std::stod(text.substr(last_comma + 1));
  CHECK(cum == doctest::Approx(path.total_cost).epsilon(1e-9));
}
