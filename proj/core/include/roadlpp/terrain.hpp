#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "roadlpp/errors.hpp"

namespace roadlpp::terrain {

/// Georeferenced elevation raster, row-major from the northwest corner.
struct ElevationGrid {
  std::int64_t ncols = 0;
  std::int64_t nrows = 0;
  double xllcorner = 0;
  double yllcorner = 0;
  double cellsize = 0;
  double nodata_value = -9999;
  bool has_nodata = false;
  std::vector<double> heights;

  bool in_bounds(std::int64_t row, std::int64_t col) const {
    return row >= 0 && row < nrows && col >= 0 && col < ncols;
  }
  double height(std::int64_t row, std::int64_t col) const {
    return heights[static_cast<std::size_t>(row * ncols + col)];
  }
  bool passable(std::int64_t row, std::int64_t col) const {
    return !has_nodata || height(row, col) != nodata_value;
  }
  /// Longitude/latitude of a cell center.
  double center_lon(std::int64_t col) const { return xllcorner + (col + 0.5) * cellsize; }
  double center_lat(std::int64_t row) const { return yllcorner + (nrows - row - 0.5) * cellsize; }
};

/// Parses the ESRI ASCII grid format: header lines ncols, nrows, xllcorner,
/// yllcorner, cellsize, optional NODATA_value, then whitespace-separated
/// heights. Parse errors carry a line number.
ElevationGrid load_ascii_grid(std::istream& in);
ElevationGrid load_ascii_grid_file(const std::string& path);
void write_ascii_grid(const ElevationGrid& grid, std::ostream& out);

/// Cost of moving between adjacent cells with the given heights at grid
/// spacing delta (meters). Diagonal moves pass delta * sqrt(2).
double edge_weight(double h1, double h2, double delta);

struct Cell {
  std::int64_t row = 0;
  std::int64_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

struct TerrainPath {
  std::vector<Cell> cells;
  double total_cost = 0;
};

/// Least-cost path by Dijkstra with a deterministic (cost, row, col) frontier
/// order. Nodata cells are impassable.
TerrainPath shortest_path(const ElevationGrid& grid, Cell src, Cell dst, double delta,
                          int connectivity);

/// Cell whose center is nearest to the given coordinates.
Cell cell_from_latlon(const ElevationGrid& grid, double lat, double lon);

/// GeoJSON FeatureCollection with the path as a LineString of cell centers
/// (a Point when the path has a single cell).
std::string path_to_geojson(const TerrainPath& path, const ElevationGrid& grid);

/// Trace rows "row,col,height,cum_cost".
void path_to_csv(const TerrainPath& path, const ElevationGrid& grid, double delta,
                 std::ostream& out);

}  // namespace roadlpp::terrain
