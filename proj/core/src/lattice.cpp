#include "roadlpp/lattice.hpp"

#include <ostream>
#include <string>

namespace roadlpp {

Point from_rotated(RotatedCoords rc) {
  if (((rc.phi ^ rc.psi) & 1) != 0)
    throw DomainError("rotated coordinates (" + std::to_string(rc.phi) + "," +
                      std::to_string(rc.psi) + ") have mixed parity");
  return {(rc.phi + rc.psi) / 2, (rc.phi - rc.psi) / 2};
}

std::vector<Point> line_points(Coord T, Coord psi_min, Coord psi_max) {
  if (psi_min > psi_max) throw DomainError("line_points: psi_min exceeds psi_max");
  std::vector<Point> out;
  Coord psi = psi_min;
  if (((psi ^ T) & 1) != 0) ++psi;  // snap to the parity of T
  for (; psi <= psi_max; psi += 2) out.push_back(from_rotated({T, psi}));
  return out;
}

Region::Region(Point lo, Point hi) : lo_(lo), hi_(hi) {
  if (!(lo.x <= hi.x && lo.y <= hi.y))
    throw DomainError("region min corner must be <= max corner componentwise");
}

WeightField::WeightField(Region region, std::uint64_t seed, std::vector<double> weights)
    : region_(region),
      seed_(seed),
      row_stride_(static_cast<std::size_t>(region.width())),
      weights_(std::move(weights)) {}

WeightField WeightField::sample(const Region& region, std::uint64_t seed,
                                std::uint64_t max_vertices) {
  const std::uint64_t n = region.vertex_count();
  if (n > max_vertices)
    throw CapacityError("weight field of " + std::to_string(n) +
                        " vertices exceeds budget of " + std::to_string(max_vertices));
  std::vector<double> w(static_cast<std::size_t>(n));
  std::size_t i = 0;
  for (Coord y = region.lo().y; y <= region.hi().y; ++y)
    for (Coord x = region.lo().x; x <= region.hi().x; ++x)
      w[i++] = exp1_from_hash(vertex_hash(seed, x, y, /*stream=*/0));
  return WeightField(region, seed, std::move(w));
}

WeightField WeightField::from_values(const Region& region, std::vector<double> values) {
  if (values.size() != region.vertex_count())
    throw DomainError("from_values: value count does not match region vertex count");
  return WeightField(region, 0, std::move(values));
}

void WeightField::to_csv(std::ostream& out) const {
  out << "x,y,weight\n";
  for (Coord y = region_.lo().y; y <= region_.hi().y; ++y)
    for (Coord x = region_.lo().x; x <= region_.hi().x; ++x)
      out << x << ',' << y << ',' << (*this)(x, y) << '\n';
}

}  // namespace roadlpp
