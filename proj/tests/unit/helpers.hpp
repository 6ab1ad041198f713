#pragma once

#include <algorithm>
#include <limits>
#include <random>
#include <vector>

#include "roadlpp/lattice.hpp"
#include "roadlpp/lpp.hpp"

namespace testutil {

using roadlpp::Coord;
using roadlpp::Point;
using roadlpp::Region;
using roadlpp::WeightField;

/// The hand-checked 3x3 integer fixture: interior weights chosen so the
/// unique optimum from (0,0) to (2,2) is up, up, right, right with value 10.
inline WeightField small_integer_field() {
  const Region region({0, 0}, {2, 2});
  // row-major, y outer: (x,y) at index y*3+x
  std::vector<double> w = {
      0, 1, 4,  // y=0: (0,0) (1,0) (2,0)
      2, 3, 1,  // y=1
      6, 2, 0,  // y=2
  };
  return WeightField::from_values(region, std::move(w));
}

struct EnumerationResult {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<Point> path;
  long paths_seen = 0;
};

/// Exhaustive maximum over all up-right paths, interior weights only. The
/// independent oracle for the last-passage DP.
inline EnumerationResult enumerate_lpp(const WeightField& field, Point u, Point v) {
  EnumerationResult best;
  std::vector<Point> current{u};
  auto walk = [&](auto&& self, Point p, double interior_sum) -> void {
    if (p == v) {
      ++best.paths_seen;
      if (interior_sum > best.value) {
        best.value = interior_sum;
        best.path = current;
      }
      return;
    }
    for (const Point step : {Point{1, 0}, Point{0, 1}}) {
      const Point q = p + step;
      if (!roadlpp::leq(q, v)) continue;
      current.push_back(q);
      self(self, q, interior_sum + (q == v ? 0.0 : field.at(q)));
      current.pop_back();
    }
  };
  if (u == v) {
    best.value = 0;
    best.path = {u};
    best.paths_seen = 1;
    return best;
  }
  walk(walk, u, 0.0);
  return best;
}

inline WeightField random_real_field(const Region& region, std::uint64_t seed) {
  return WeightField::sample(region, seed);
}

inline WeightField random_integer_field(const Region& region, std::uint64_t seed, int lo = 0,
                                        int hi = 9) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> w(lo, hi);
  std::vector<double> values(static_cast<std::size_t>(region.vertex_count()));
  for (double& v : values) v = w(rng);
  return WeightField::from_values(region, std::move(values));
}

}  // namespace testutil
