#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "roadlpp/errors.hpp"
#include "roadlpp/rng.hpp"

namespace roadlpp {

using Coord = std::int64_t;

struct Point {
  Coord x = 0;
  Coord y = 0;

  friend bool operator==(const Point&, const Point&) = default;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
};

/// Componentwise partial order used by up-right paths.
constexpr bool leq(Point a, Point b) { return a.x <= b.x && a.y <= b.y; }

/// Rotated axes: phi is the time coordinate, psi the space coordinate.
struct RotatedCoords {
  Coord phi = 0;
  Coord psi = 0;

  friend bool operator==(const RotatedCoords&, const RotatedCoords&) = default;
};

constexpr RotatedCoords rotate_coords(Point v) { return {v.x + v.y, v.x - v.y}; }
constexpr Coord phi_of(Point v) { return v.x + v.y; }
constexpr Coord psi_of(Point v) { return v.x - v.y; }

/// Inverse of rotate_coords; defined only when phi and psi share parity.
Point from_rotated(RotatedCoords rc);

/// Lattice points v with phi(v)=T and psi(v) in [psi_min, psi_max], ordered by
/// psi. Only psi with the parity of T occur; the list may be empty.
std::vector<Point> line_points(Coord T, Coord psi_min, Coord psi_max);

/// Closed axis-aligned rectangle of lattice points.
class Region {
 public:
  Region(Point lo, Point hi);

  Point lo() const { return lo_; }
  Point hi() const { return hi_; }
  Coord width() const { return hi_.x - lo_.x + 1; }
  Coord height() const { return hi_.y - lo_.y + 1; }
  std::uint64_t vertex_count() const {
    return static_cast<std::uint64_t>(width()) * static_cast<std::uint64_t>(height());
  }
  bool contains(Point p) const {
    return p.x >= lo_.x && p.x <= hi_.x && p.y >= lo_.y && p.y <= hi_.y;
  }
  bool contains(const Region& r) const { return contains(r.lo()) && contains(r.hi()); }
  std::size_t index(Point p) const {
    return static_cast<std::size_t>(p.y - lo_.y) * static_cast<std::size_t>(width()) +
           static_cast<std::size_t>(p.x - lo_.x);
  }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  Point lo_;
  Point hi_;
};

/// Immutable field of i.i.d. Exp(1) vertex weights over a region.
///
/// Weights are generated counter-based from (seed, x, y), so two fields with
/// the same seed agree on every shared vertex regardless of their bounds.
class WeightField {
 public:
  static constexpr std::uint64_t kDefaultMaxVertices = 1ull << 27;

  static WeightField sample(const Region& region, std::uint64_t seed,
                            std::uint64_t max_vertices = kDefaultMaxVertices);

  /// Test fixture constructor: explicit values, row-major with y outer
  /// (index = (y - lo.y) * width + (x - lo.x)).
  static WeightField from_values(const Region& region, std::vector<double> values);

  const Region& region() const { return region_; }
  std::uint64_t seed() const { return seed_; }

  /// Bounds-checked access.
  double at(Point p) const {
    if (!region_.contains(p)) throw BoundsError("weight lookup outside field region");
    return weights_[region_.index(p)];
  }

  /// Unchecked access for hot loops.
  double operator()(Coord x, Coord y) const {
    return weights_[static_cast<std::size_t>(y - region_.lo().y) * row_stride_ +
                    static_cast<std::size_t>(x - region_.lo().x)];
  }

  const double* row(Coord y) const {
    return weights_.data() + static_cast<std::size_t>(y - region_.lo().y) * row_stride_;
  }
  std::size_t row_stride() const { return row_stride_; }
  Coord x0() const { return region_.lo().x; }

  /// Debug dump, rows "x,y,weight".
  void to_csv(std::ostream& out) const;

 private:
  WeightField(Region region, std::uint64_t seed, std::vector<double> weights);

  Region region_;
  std::uint64_t seed_ = 0;
  std::size_t row_stride_ = 0;
  std::vector<double> weights_;
};

}  // namespace roadlpp
