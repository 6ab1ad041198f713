#include "roadlpp/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace roadlpp::fluctuation {

double straight_line_psi(double theta, double t) {
  return t * (std::cos(theta) - std::sin(theta)) / (std::cos(theta) + std::sin(theta));
}

double deviation_at(const lpp::GeodesicPath& path, double theta, Coord t) {
  const Coord t0 = phi_of(path.start());
  const Coord t1 = phi_of(path.end());
  if (t < t0 || t > t1) throw DomainError("deviation_at: line outside path span");
  return std::abs(static_cast<double>(psi_of(path.at_phi(t))) -
                  straight_line_psi(theta, static_cast<double>(t)));
}

FluctuationSample transversal_fluctuation(const WeightField& field, double theta, Coord T,
                                          double horizon, lpp::TiePolicy policy) {
  if (!(theta > 0 && theta < std::numbers::pi / 2))
    throw DomainError("transversal_fluctuation: theta must lie in (0, pi/2)");
  if (T < 1) throw DomainError("transversal_fluctuation: T must be >= 1");
  const lpp::GeodesicPath path =
      lpp::directed_geodesic(field, {.start = {0, 0}, .theta = theta, .horizon = horizon}, policy);
  if (phi_of(path.end()) < T)
    throw HorizonError("directed geodesic does not reach the line phi = " + std::to_string(T));
  FluctuationSample sample;
  sample.T = T;
  sample.deviation_at_T = deviation_at(path, theta, T);
  double sup = 0;
  for (const Point& p : path.points) {
    const Coord t = phi_of(p);
    if (t > T) break;
    sup = std::max(sup, std::abs(static_cast<double>(psi_of(p)) -
                                 straight_line_psi(theta, static_cast<double>(t))));
  }
  sample.sup_deviation = sup;
  return sample;
}

namespace {

// Every mesh_step-th lattice point of the segment on phi = line_phi with the
// given psi midpoint and halfwidth.
std::vector<Point> segment_mesh(Coord line_phi, Coord psi_mid, Coord halfwidth, int mesh_step) {
  std::vector<Point> all = line_points(line_phi, psi_mid - halfwidth, psi_mid + halfwidth);
  std::vector<Point> mesh;
  for (std::size_t i = 0; i < all.size(); i += static_cast<std::size_t>(mesh_step))
    mesh.push_back(all[i]);
  return mesh;
}

std::vector<Point> middle_third_key(const lpp::GeodesicPath& p, Coord n) {
  const Coord lo = (n + 2) / 3;       // ceil(n/3)
  const Coord hi = (2 * n) / 3;       // floor(2n/3)
  std::vector<Point> key;
  key.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Coord t = lo; t <= hi; ++t) key.push_back(p.at_phi(t));
  return key;
}

}  // namespace

bool middle_third_coincide(const lpp::GeodesicPath& a, const lpp::GeodesicPath& b, Coord n) {
  if (n < 3) throw ScaleError("middle third undefined for n < 3");
  return middle_third_key(a, n) == middle_third_key(b, n);
}

std::vector<lpp::GeodesicPath> coalescence_paths(const WeightField& field, Coord n, Coord k,
                                                 Coord segment_halfwidth, int mesh_step,
                                                 lpp::TiePolicy policy) {
  if (n < 3) throw ScaleError("coalescence_classes needs n >= 3");
  if (mesh_step < 1) throw DomainError("mesh_step must be >= 1");
  const double shift = static_cast<double>(k) * std::pow(static_cast<double>(n), 2.0 / 3.0);
  // midpoint (n - shift, n + shift) has psi = -2*shift; round to the even
  // parity of the line phi = 2n
  const Coord psi_mid = -2 * std::llround(shift);
  const std::vector<Point> starts = segment_mesh(0, 0, segment_halfwidth, mesh_step);
  const std::vector<Point> targets = segment_mesh(2 * n, psi_mid, segment_halfwidth, mesh_step);
  if (starts.empty() || targets.empty())
    throw DomainError("coalescence mesh is empty; increase segment_halfwidth");
  std::vector<lpp::GeodesicPath> paths;
  paths.reserve(starts.size() * targets.size());
  for (const Point& v : targets) {
    // one backward profile per target serves every start; pairs without an
    // up-right connection (possible for large |k| at desk scale) are skipped
    const lpp::PassageProfile profile(field, v);
    for (const Point& u : starts)
      if (leq(u, v)) paths.push_back(profile.path_from(u, policy));
  }
  if (paths.empty())
    throw DomainError("no orderable (start, target) pair in the coalescence mesh");
  return paths;
}

CoalescenceCount coalescence_classes(const WeightField& field, Coord n, Coord k,
                                     Coord segment_halfwidth, int mesh_step,
                                     lpp::TiePolicy policy) {
  const std::vector<lpp::GeodesicPath> paths =
      coalescence_paths(field, n, k, segment_halfwidth, mesh_step, policy);
  std::map<std::vector<std::int64_t>, int> classes;
  for (const lpp::GeodesicPath& p : paths) {
    std::vector<Point> key = middle_third_key(p, n);
    std::vector<std::int64_t> flat;
    flat.reserve(key.size());
    for (const Point& q : key) flat.push_back(psi_of(q));  // phi values are fixed by position
    classes.emplace(std::move(flat), 0);
  }
  return {n, k, static_cast<std::int64_t>(classes.size())};
}

std::int64_t intersection_size(const lpp::GeodesicPath& a, const lpp::GeodesicPath& b,
                               const Region& window) {
  if (a.points.empty() || b.points.empty()) return 0;
  const Coord lo = std::max(phi_of(a.start()), phi_of(b.start()));
  const Coord hi = std::min(phi_of(a.end()), phi_of(b.end()));
  std::int64_t count = 0;
  for (Coord t = lo; t <= hi; ++t) {
    const Point p = a.at_phi(t);
    if (p == b.at_phi(t) && window.contains(p)) ++count;
  }
  return count;
}

}  // namespace roadlpp::fluctuation
