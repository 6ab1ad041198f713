#pragma once

#include <span>
#include <string>
#include <vector>

#include "roadlpp/lattice.hpp"

namespace roadlpp::lpp {

/// How backtracking resolves equal DP values. Exp(1) weights make ties a
/// measure-zero event, so Strict treats one as data corruption; UpFirst gives
/// deterministic paths on integer test fixtures.
enum class TiePolicy { Strict, UpFirst };

/// Up-right lattice path together with its passage time. `value` follows the
/// endpoint-exclusive convention: the sum of field weights over interior
/// points only.
struct GeodesicPath {
  std::vector<Point> points;
  double value = 0;

  Point start() const { return points.front(); }
  Point end() const { return points.back(); }
  /// Vertex where the path meets the line phi = t (one exists for every t in
  /// the path's phi-span because each step advances phi by exactly one).
  Point at_phi(Coord t) const;
};

struct DirectedGeodesicSpec {
  Point start;
  double theta = 0;    // radians, in (0, pi/2)
  double horizon = 0;  // target radius R, >= 1
};

/// Maximal interior weight sum over up-right paths from u to v.
double last_passage_time(const WeightField& field, Point u, Point v);

/// The argmax path; value equals last_passage_time(field, u, v).
GeodesicPath geodesic(const WeightField& field, Point u, Point v,
                      TiePolicy policy = TiePolicy::Strict);

/// Endpoint-inclusive passage times from every u <= target down to the field
/// region corner, computed in one backward sweep.
class PassageProfile {
 public:
  PassageProfile(const WeightField& field, Point target);

  const Region& domain() const { return domain_; }
  Point target() const { return target_; }

  /// Endpoint-exclusive passage time from u to the target.
  double value(Point u) const;
  /// Endpoint-inclusive DP value at u.
  double inclusive(Point u) const;
  /// Geodesic from u to the target by greedy forward steps on the profile.
  GeodesicPath path_from(Point u, TiePolicy policy = TiePolicy::Strict) const;

 private:
  const WeightField* field_;
  Region domain_;
  Point target_;
  std::vector<double> incl_;
};

inline PassageProfile passage_profile(const WeightField& field, Point target) {
  return PassageProfile(field, target);
}

/// Rounded finite target for a directed geodesic.
Point directed_target(Point start, double theta, double horizon);

/// Finite-horizon stand-in for the semi-infinite geodesic in direction theta:
/// the geodesic from start to directed_target(start, theta, horizon). Its
/// restriction to a fixed window stabilizes as the horizon grows.
GeodesicPath directed_geodesic(const WeightField& field, const DirectedGeodesicSpec& spec,
                               TiePolicy policy = TiePolicy::Strict);

/// True iff paths, pre-sorted by psi of their start points, keep that order
/// on every line phi = T that two of them share (touching allowed).
bool check_planarity(std::span<const GeodesicPath> paths);

void path_to_csv(const GeodesicPath& path, std::ostream& out);
std::string path_to_json(const GeodesicPath& path);

namespace detail {

/// Fills the endpoint-inclusive forward DP over the rectangle [u, v]:
/// t[j*w+i] = tau(u + (i,j)) + max(left, down). `t` is resized as needed.
void fill_forward_dp(const WeightField& field, Point u, Point v, std::vector<double>& t);

/// Backtracks from v toward u on a filled forward DP, stopping at the vertex
/// with phi == phi_stop (which must lie in [phi(u), phi(v)]).
Point backtrack_to_phi(Point u, Point v, const std::vector<double>& t, Coord phi_stop,
                       TiePolicy policy);

}  // namespace detail

}  // namespace roadlpp::lpp
