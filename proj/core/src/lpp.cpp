#include "roadlpp/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace roadlpp::lpp {

namespace {

void require_ordered_pair(const WeightField& field, Point u, Point v) {
  if (!leq(u, v))
    throw DomainError("last passage requires u <= v componentwise");
  if (!field.region().contains(u) || !field.region().contains(v))
    throw BoundsError("endpoints outside field region");
}

Point pick_predecessor(Point p, Point u, const std::vector<double>& t, std::size_t w,
                       TiePolicy policy) {
  const bool has_left = p.x > u.x;
  const bool has_down = p.y > u.y;
  auto val = [&](Point q) {
    return t[static_cast<std::size_t>(q.y - u.y) * w + static_cast<std::size_t>(q.x - u.x)];
  };
  if (has_left && has_down) {
    const Point left{p.x - 1, p.y};
    const Point down{p.x, p.y - 1};
    const double vl = val(left), vd = val(down);
    if (vl == vd) {
      if (policy == TiePolicy::Strict)
        throw TieError("exact tie while backtracking at (" + std::to_string(p.x) + "," +
                       std::to_string(p.y) + ")");
      return down;  // up-first: the forward path takes the up step out of `down`
    }
    return vl > vd ? left : down;
  }
  return has_left ? Point{p.x - 1, p.y} : Point{p.x, p.y - 1};
}

}  // namespace

Point GeodesicPath::at_phi(Coord t) const {
  const Coord t0 = phi_of(points.front());
  const Coord t1 = phi_of(points.back());
  if (t < t0 || t > t1) throw DomainError("at_phi: line outside path span");
  return points[static_cast<std::size_t>(t - t0)];
}

namespace detail {

void fill_forward_dp(const WeightField& field, Point u, Point v, std::vector<double>& t) {
  const std::size_t w = static_cast<std::size_t>(v.x - u.x + 1);
  const std::size_t h = static_cast<std::size_t>(v.y - u.y + 1);
  t.resize(w * h);
  for (std::size_t j = 0; j < h; ++j) {
    const double* wf = field.row(u.y + static_cast<Coord>(j)) + (u.x - field.x0());
    double* row = t.data() + j * w;
    if (j == 0) {
      double acc = 0;
      for (std::size_t i = 0; i < w; ++i) row[i] = acc += wf[i];
    } else {
      const double* below = row - w;
      row[0] = below[0] + wf[0];
      double left = row[0];
      for (std::size_t i = 1; i < w; ++i) {
        left = wf[i] + std::max(left, below[i]);
        row[i] = left;
      }
    }
  }
}

Point backtrack_to_phi(Point u, Point v, const std::vector<double>& t, Coord phi_stop,
                       TiePolicy policy) {
  const std::size_t w = static_cast<std::size_t>(v.x - u.x + 1);
  Point p = v;
  while (phi_of(p) > phi_stop) p = pick_predecessor(p, u, t, w, policy);
  return p;
}

}  // namespace detail

double last_passage_time(const WeightField& field, Point u, Point v) {
  require_ordered_pair(field, u, v);
  if (u == v) return 0.0;
  std::vector<double> t;
  detail::fill_forward_dp(field, u, v, t);
  // subtracting the endpoint sum as one term keeps adjacent pairs exactly zero
  return t.back() - (field.at(u) + field.at(v));
}

GeodesicPath geodesic(const WeightField& field, Point u, Point v, TiePolicy policy) {
  require_ordered_pair(field, u, v);
  GeodesicPath path;
  if (u == v) {
    path.points = {u};
    path.value = 0.0;
    return path;
  }
  std::vector<double> t;
  detail::fill_forward_dp(field, u, v, t);
  const std::size_t w = static_cast<std::size_t>(v.x - u.x + 1);
  path.points.reserve(static_cast<std::size_t>(phi_of(v) - phi_of(u) + 1));
  Point p = v;
  path.points.push_back(p);
  while (p != u) {
    p = pick_predecessor(p, u, t, w, policy);
    path.points.push_back(p);
  }
  std::reverse(path.points.begin(), path.points.end());
  path.value = t.back() - (field.at(u) + field.at(v));
  return path;
}

PassageProfile::PassageProfile(const WeightField& field, Point target)
    : field_(&field), domain_(field.region().lo(), target), target_(target) {
  if (!field.region().contains(target)) throw BoundsError("profile target outside region");
  const std::size_t w = static_cast<std::size_t>(domain_.width());
  const std::size_t h = static_cast<std::size_t>(domain_.height());
  incl_.resize(w * h);
  const Point lo = domain_.lo();
  // backward sweep: incl(u) = tau_u + max(incl(u+e1), incl(u+e2))
  for (std::size_t jr = h; jr-- > 0;) {
    const Coord y = lo.y + static_cast<Coord>(jr);
    const double* wf = field.row(y) + (lo.x - field.x0());
    double* row = incl_.data() + jr * w;
    const double* above = row + w;  // valid when jr < h-1
    if (jr == h - 1) {
      double acc = 0;
      for (std::size_t i = w; i-- > 0;) row[i] = acc += wf[i];
    } else {
      row[w - 1] = above[w - 1] + wf[w - 1];
      double right = row[w - 1];
      for (std::size_t i = w - 1; i-- > 0;) {
        right = wf[i] + std::max(right, above[i]);
        row[i] = right;
      }
    }
  }
}

double PassageProfile::inclusive(Point u) const {
  if (!domain_.contains(u)) throw BoundsError("profile query outside domain");
  return incl_[domain_.index(u)];
}

double PassageProfile::value(Point u) const {
  if (u == target_) return 0.0;
  return inclusive(u) - (field_->at(u) + field_->at(target_));
}

GeodesicPath PassageProfile::path_from(Point u, TiePolicy policy) const {
  if (!domain_.contains(u)) throw BoundsError("profile query outside domain");
  GeodesicPath path;
  path.value = value(u);
  path.points.reserve(static_cast<std::size_t>(phi_of(target_) - phi_of(u) + 1));
  Point p = u;
  path.points.push_back(p);
  while (p != target_) {
    const bool has_right = p.x < target_.x;
    const bool has_up = p.y < target_.y;
    if (has_right && has_up) {
      const Point right{p.x + 1, p.y};
      const Point up{p.x, p.y + 1};
      const double vr = incl_[domain_.index(right)];
      const double vu = incl_[domain_.index(up)];
      if (vr == vu) {
        if (policy == TiePolicy::Strict)
          throw TieError("exact tie on passage profile at (" + std::to_string(p.x) + "," +
                         std::to_string(p.y) + ")");
        p = up;
      } else {
        p = vr > vu ? right : up;
      }
    } else {
      p = has_right ? Point{p.x + 1, p.y} : Point{p.x, p.y + 1};
    }
    path.points.push_back(p);
  }
  return path;
}

Point directed_target(Point start, double theta, double horizon) {
  if (!(theta > 0 && theta < std::numbers::pi / 2))
    throw DomainError("directed geodesic needs theta strictly inside (0, pi/2)");
  if (!(horizon >= 1)) throw DomainError("directed geodesic needs horizon >= 1");
  return {start.x + std::llround(horizon * std::cos(theta)),
          start.y + std::llround(horizon * std::sin(theta))};
}

GeodesicPath directed_geodesic(const WeightField& field, const DirectedGeodesicSpec& spec,
                               TiePolicy policy) {
  const Point target = directed_target(spec.start, spec.theta, spec.horizon);
  if (!field.region().contains(target))
    throw BoundsError("directed geodesic target (" + std::to_string(target.x) + "," +
                      std::to_string(target.y) + ") outside field region");
  return geodesic(field, spec.start, target, policy);
}

bool check_planarity(std::span<const GeodesicPath> paths) {
  for (std::size_t a = 0; a < paths.size(); ++a) {
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const GeodesicPath& pa = paths[a];
      const GeodesicPath& pb = paths[b];
      const Coord lo = std::max(phi_of(pa.start()), phi_of(pb.start()));
      const Coord hi = std::min(phi_of(pa.end()), phi_of(pb.end()));
      for (Coord t = lo; t <= hi; ++t)
        if (psi_of(pa.at_phi(t)) > psi_of(pb.at_phi(t))) return false;
    }
  }
  return true;
}

void path_to_csv(const GeodesicPath& path, std::ostream& out) {
  out << "x,y\n";
  for (const Point& p : path.points) out << p.x << ',' << p.y << '\n';
}

std::string path_to_json(const GeodesicPath& path) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    if (i) out << ',';
    out << '[' << path.points[i].x << ',' << path.points[i].y << ']';
  }
  out << ']';
  return out.str();
}

}  // namespace roadlpp::lpp
