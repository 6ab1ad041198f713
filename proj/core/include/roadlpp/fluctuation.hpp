#pragma once

#include <cstdint>
#include <vector>

#include "roadlpp/lattice.hpp"
#include "roadlpp/lpp.hpp"

namespace roadlpp::fluctuation {

/// Deviation of a directed geodesic from the straight line in its direction,
/// measured in the psi (space) coordinate.
struct FluctuationSample {
  Coord T = 0;
  double deviation_at_T = 0;
  double sup_deviation = 0;
};

/// psi of the straight line from the origin in direction theta where it
/// crosses the line phi = t.
double straight_line_psi(double theta, double t);

/// Deviation |psi(path(t)) - psi(line(t))| read off at the first path vertex
/// with phi >= t.
double deviation_at(const lpp::GeodesicPath& path, double theta, Coord t);

/// Directed geodesic from the origin, deviation at the crossing of phi = T
/// and the supremum over 0 <= t <= T.
FluctuationSample transversal_fluctuation(const WeightField& field, double theta, Coord T,
                                          double horizon,
                                          lpp::TiePolicy policy = lpp::TiePolicy::Strict);

struct CoalescenceCount {
  Coord n = 0;
  Coord k = 0;
  std::int64_t class_count = 0;
};

/// Geodesics for a mesh of (u, v) pairs: u on the segment of the line phi=0
/// centered at the origin, v on the segment of phi=2n centered at
/// (n - k n^{2/3}, n + k n^{2/3}) rounded to lattice parity. Every mesh_step-th
/// vertex of each segment is used.
std::vector<lpp::GeodesicPath> coalescence_paths(const WeightField& field, Coord n, Coord k,
                                                 Coord segment_halfwidth, int mesh_step = 4,
                                                 lpp::TiePolicy policy = lpp::TiePolicy::Strict);

/// True iff both paths visit the same vertex on every line phi = t for
/// n/3 <= t <= 2n/3.
bool middle_third_coincide(const lpp::GeodesicPath& a, const lpp::GeodesicPath& b, Coord n);

/// Number of equivalence classes of the middle-third relation over the mesh.
CoalescenceCount coalescence_classes(const WeightField& field, Coord n, Coord k,
                                     Coord segment_halfwidth, int mesh_step = 4,
                                     lpp::TiePolicy policy = lpp::TiePolicy::Strict);

/// Number of lattice points lying on both paths and inside the window.
std::int64_t intersection_size(const lpp::GeodesicPath& a, const lpp::GeodesicPath& b,
                               const Region& window);

}  // namespace roadlpp::fluctuation
