#include "roadlpp/terrain.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

namespace roadlpp::terrain {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

ElevationGrid load_ascii_grid(std::istream& in) {
  ElevationGrid grid;
  bool saw_ncols = false, saw_nrows = false, saw_xll = false, saw_yll = false, saw_cell = false;
  long line_no = 0;
  std::string line;
  // header: key/value lines until the first line starting with a number
  while (true) {
    const std::streampos before = in.tellg();
    if (!std::getline(in, line)) throw ParseError("ascii grid: no data rows found");
    ++line_no;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;  // blank line
    if (!key.empty() && (std::isdigit(static_cast<unsigned char>(key[0])) || key[0] == '-' ||
                         key[0] == '+' || key[0] == '.')) {
      in.seekg(before);
      --line_no;
      break;
    }
    double value = 0;
    if (!(ls >> value))
      throw ParseError("ascii grid line " + std::to_string(line_no) + ": header '" + key +
                       "' has no numeric value");
    const std::string k = lower(key);
    if (k == "ncols") {
      grid.ncols = static_cast<std::int64_t>(value);
      saw_ncols = true;
    } else if (k == "nrows") {
      grid.nrows = static_cast<std::int64_t>(value);
      saw_nrows = true;
    } else if (k == "xllcorner") {
      grid.xllcorner = value;
      saw_xll = true;
    } else if (k == "yllcorner") {
      grid.yllcorner = value;
      saw_yll = true;
    } else if (k == "cellsize") {
      grid.cellsize = value;
      saw_cell = true;
    } else if (k == "nodata_value") {
      grid.nodata_value = value;
      grid.has_nodata = true;
    } else {
      throw ParseError("ascii grid line " + std::to_string(line_no) + ": unknown header '" + key +
                       "'");
    }
  }
  if (!saw_ncols || !saw_nrows || !saw_xll || !saw_yll || !saw_cell)
    throw ParseError("ascii grid: missing mandatory header line");
  if (grid.ncols < 1 || grid.nrows < 1)
    throw ParseError("ascii grid: ncols and nrows must be positive");
  if (!(grid.cellsize > 0)) throw ParseError("ascii grid: cellsize must be positive");

  const std::size_t expected = static_cast<std::size_t>(grid.ncols * grid.nrows);
  grid.heights.reserve(expected);
  double h = 0;
  while (in >> h) grid.heights.push_back(h);
  if (grid.heights.size() != expected)
    throw ParseError("ascii grid: expected " + std::to_string(expected) + " values, found " +
                     std::to_string(grid.heights.size()));
  return grid;
}

ElevationGrid load_ascii_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open grid file: " + path);
  return load_ascii_grid(in);
}

void write_ascii_grid(const ElevationGrid& grid, std::ostream& out) {
  out.precision(17);
  out << "ncols " << grid.ncols << "\n";
  out << "nrows " << grid.nrows << "\n";
  out << "xllcorner " << grid.xllcorner << "\n";
  out << "yllcorner " << grid.yllcorner << "\n";
  out << "cellsize " << grid.cellsize << "\n";
  if (grid.has_nodata) out << "NODATA_value " << grid.nodata_value << "\n";
  for (std::int64_t r = 0; r < grid.nrows; ++r) {
    for (std::int64_t c = 0; c < grid.ncols; ++c) {
      if (c) out << ' ';
      out << grid.height(r, c);
    }
    out << "\n";
  }
}

double edge_weight(double h1, double h2, double delta) {
  if (!(delta > 0)) throw DomainError("edge_weight: delta must be positive");
  const double dh = h1 - h2;
  return std::sqrt(delta * delta + dh * dh);
}

TerrainPath shortest_path(const ElevationGrid& grid, Cell src, Cell dst, double delta,
                          int connectivity) {
  if (connectivity != 4 && connectivity != 8)
    throw DomainError("connectivity must be 4 or 8");
  if (!(delta > 0)) throw DomainError("delta must be positive");
  if (!grid.in_bounds(src.row, src.col) || !grid.in_bounds(dst.row, dst.col))
    throw BoundsError("shortest_path endpoint outside grid");
  if (!grid.passable(src.row, src.col) || !grid.passable(dst.row, dst.col))
    throw DomainError("shortest_path endpoint on a nodata cell");

  const std::size_t n = static_cast<std::size_t>(grid.nrows * grid.ncols);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, kInf);
  std::vector<std::int64_t> parent(n, -1);
  std::vector<char> settled(n, 0);
  auto idx = [&](std::int64_t r, std::int64_t c) {
    return static_cast<std::size_t>(r * grid.ncols + c);
  };

  using Entry = std::tuple<double, std::int64_t, std::int64_t>;  // cost, row, col
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[idx(src.row, src.col)] = 0;
  frontier.emplace(0.0, src.row, src.col);

  const double diag = delta * std::sqrt(2.0);
  static constexpr std::int64_t kStep4[4][2] = {{-1, 0}, {0, -1}, {0, 1}, {1, 0}};
  static constexpr std::int64_t kStep8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                                {0, 1},   {1, -1}, {1, 0},  {1, 1}};

  while (!frontier.empty()) {
    const auto [cost, row, col] = frontier.top();
    frontier.pop();
    const std::size_t i = idx(row, col);
    if (settled[i]) continue;
    settled[i] = 1;
    if (row == dst.row && col == dst.col) break;
    const double h_here = grid.height(row, col);
    const int degree = connectivity == 4 ? 4 : 8;
    for (int s = 0; s < degree; ++s) {
      const std::int64_t nr = row + (connectivity == 4 ? kStep4[s][0] : kStep8[s][0]);
      const std::int64_t nc = col + (connectivity == 4 ? kStep4[s][1] : kStep8[s][1]);
      if (!grid.in_bounds(nr, nc) || !grid.passable(nr, nc)) continue;
      const bool diagonal = nr != row && nc != col;
      const double w = edge_weight(h_here, grid.height(nr, nc), diagonal ? diag : delta);
      const std::size_t j = idx(nr, nc);
      if (cost + w < dist[j]) {
        dist[j] = cost + w;
        parent[j] = static_cast<std::int64_t>(i);
        frontier.emplace(dist[j], nr, nc);
      }
    }
  }

  const std::size_t d = idx(dst.row, dst.col);
  if (dist[d] == kInf)
    throw NoPathError("destination unreachable (nodata barrier or disconnected grid)");
  TerrainPath path;
  path.total_cost = dist[d];
  for (std::int64_t i = static_cast<std::int64_t>(d); i != -1; i = parent[static_cast<std::size_t>(i)])
    path.cells.push_back({i / grid.ncols, i % grid.ncols});
  std::reverse(path.cells.begin(), path.cells.end());
  return path;
}

Cell cell_from_latlon(const ElevationGrid& grid, double lat, double lon) {
  const std::int64_t col = static_cast<std::int64_t>(std::floor((lon - grid.xllcorner) / grid.cellsize));
  const std::int64_t row =
      grid.nrows - 1 - static_cast<std::int64_t>(std::floor((lat - grid.yllcorner) / grid.cellsize));
  const Cell cell{std::clamp<std::int64_t>(row, 0, grid.nrows - 1),
                  std::clamp<std::int64_t>(col, 0, grid.ncols - 1)};
  return cell;
}

std::string path_to_geojson(const TerrainPath& path, const ElevationGrid& grid) {
  if (path.cells.empty()) throw DomainError("cannot export an empty path");
  std::ostringstream out;
  out.precision(12);
  out << R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"total_cost":)"
      << path.total_cost << R"(},"geometry":{"type":)";
  if (path.cells.size() == 1) {
    out << R"("Point","coordinates":[)" << grid.center_lon(path.cells[0].col) << ','
        << grid.center_lat(path.cells[0].row) << ']';
  } else {
    out << R"("LineString","coordinates":[)";
    for (std::size_t i = 0; i < path.cells.size(); ++i) {
      if (i) out << ',';
      out << '[' << grid.center_lon(path.cells[i].col) << ',' << grid.center_lat(path.cells[i].row)
          << ']';
    }
    out << ']';
  }
  out << "}}]}";
  return out.str();
}

void path_to_csv(const TerrainPath& path, const ElevationGrid& grid, double delta,
                 std::ostream& out) {
  out.precision(17);
  out << "row,col,height,cum_cost\n";
  const double diag = delta * std::sqrt(2.0);
  double cum = 0;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    const Cell c = path.cells[i];
    if (i > 0) {
      const Cell p = path.cells[i - 1];
      const bool diagonal = p.row != c.row && p.col != c.col;
      cum += edge_weight(grid.height(p.row, p.col), grid.height(c.row, c.col),
                         diagonal ? diag : delta);
    }
    out << c.row << ',' << c.col << ',' << grid.height(c.row, c.col) << ',' << cum << '\n';
  }
}

}  // namespace roadlpp::terrain
