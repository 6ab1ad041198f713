#include "roadlpp/ukdata.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <tuple>

#include "roadlpp/csv.hpp"
#include "roadlpp/errors.hpp"

namespace roadlpp::ukdata {

using csv::parse_double;
using csv::trim;

std::vector<CountPoint> load_count_points(std::istream& in, const ColumnMap& columns,
                                          LoadReport* report) {
  const csv::Table table = csv::read_table(in);
  const std::size_t lat_col = table.require_column(columns.lat);
  const std::size_t lon_col = table.require_column(columns.lon);
  const std::size_t flow_col = table.require_column(columns.flow);
  const bool has_road = table.has_column(columns.road);
  const std::size_t road_col = has_road ? table.column.at(columns.road) : 0;

  LoadReport local;
  std::vector<CountPoint> points;
  for (const std::vector<std::string>& fields : table.rows) {
    auto get = [&](std::size_t col) -> std::string {
      return col < fields.size() ? fields[col] : std::string();
    };
    CountPoint p;
    if (!parse_double(get(lat_col), p.lat) || !parse_double(get(lon_col), p.lon) ||
        !parse_double(get(flow_col), p.flow)) {
      ++local.dropped_missing;
      continue;
    }
    if (p.lat < -90 || p.lat > 90 || p.lon < -180 || p.lon > 180 || p.flow < 0) {
      ++local.dropped_invalid;
      continue;
    }
    if (has_road) p.road_id = trim(get(road_col));
    ++local.parsed;
    points.push_back(std::move(p));
  }
  if (report) *report = local;
  return points;
}

std::vector<StripObservation> strip_select(std::span<const CountPoint> points, double lat0,
                                           double lon0, double width_km, double length_km) {
  if (!(width_km > 0) || !(length_km > 0))
    throw DomainError("strip_select: width and length must be positive");
  struct Row {
    double east, north, flow;
    std::string road_id;
  };
  std::vector<Row> rows;
  const double coslat = std::cos(lat0 * std::numbers::pi / 180.0);
  for (const CountPoint& p : points) {
    const double north = (p.lat - lat0) * kKmPerDegree;
    const double east = (p.lon - lon0) * kKmPerDegree * coslat;
    if (east < 0 || east > length_km) continue;
    if (std::abs(north) > width_km / 2) continue;
    rows.push_back({east, north, p.flow, p.road_id});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.east, a.road_id, a.flow, a.north) <
           std::tie(b.east, b.road_id, b.flow, b.north);
  });
  std::vector<StripObservation> out;
  out.reserve(rows.size());
  for (const Row& r : rows) out.push_back({r.east, r.flow});
  return out;
}

RunningMaxCurve running_max(std::span<const StripObservation> observations) {
  RunningMaxCurve curve;
  double best = 0;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (i > 0 && observations[i].distance_km < observations[i - 1].distance_km)
      throw DomainError("running_max: observations must be sorted by distance");
    best = i == 0 ? observations[i].flow : std::max(best, observations[i].flow);
    curve.distance_km.push_back(observations[i].distance_km);
    curve.flow.push_back(observations[i].flow);
    curve.running_max.push_back(best);
  }
  return curve;
}

namespace {

/// Running maximum of a curve within distance d; nullopt when the curve has
/// no observation that close.
std::optional<double> max_within(const RunningMaxCurve& curve, double d_km) {
  std::optional<double> best;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve.distance_km[i] > d_km) break;
    best = curve.running_max[i];
  }
  return best;
}

}  // namespace

double exceedance_frequency(std::span<const RunningMaxCurve> curves, double d_km, double k) {
  if (curves.empty()) throw DomainError("exceedance_frequency: no curves");
  std::int64_t exceed = 0;
  for (const RunningMaxCurve& c : curves) {
    const std::optional<double> m = max_within(c, d_km);
    if (m && *m >= k) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(curves.size());
}

std::vector<double> maxima_within(std::span<const RunningMaxCurve> curves, double d_km) {
  std::vector<double> out;
  out.reserve(curves.size());
  for (const RunningMaxCurve& c : curves) {
    const std::optional<double> m = max_within(c, d_km);
    if (m) out.push_back(*m);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

ThresholdCurve median_threshold_curve(std::span<const RunningMaxCurve> curves,
                                      std::span<const double> d_values,
                                      std::pair<double, double> freq_band,
                                      const ThresholdScan& scan) {
  if (curves.empty()) throw DomainError("median_threshold_curve: no curves");
  if (scan.k_count < 2 || !(scan.k_min > 0) || !(scan.k_max > scan.k_min))
    throw DomainError("median_threshold_curve: bad threshold scan");
  const double step = std::log(scan.k_max / scan.k_min) / (scan.k_count - 1);
  const double total = static_cast<double>(curves.size());
  ThresholdCurve result;
  std::vector<double> fit_d, fit_k;
  for (double d : d_values) {
    ThresholdBand band;
    band.d_km = d;
    // maxima sorted descending: frequency at k is the rank of the first value
    // below it, found by binary search instead of rescanning every curve
    const std::vector<double> maxima = maxima_within(curves, d);
    double log_sum = 0;
    for (int i = 0; i < scan.k_count; ++i) {
      const double k = scan.k_min * std::exp(step * i);
      const auto it = std::lower_bound(maxima.begin(), maxima.end(), k, std::greater_equal<>());
      const double freq = static_cast<double>(it - maxima.begin()) / total;
      if (freq > freq_band.first && freq < freq_band.second) {
        band.ks.push_back(k);
        log_sum += std::log(k);
      }
    }
    if (band.ks.empty()) {
      ++result.empty_bands;
    } else {
      band.k_mid = std::exp(log_sum / static_cast<double>(band.ks.size()));
      fit_d.push_back(d);
      fit_k.push_back(band.k_mid);
    }
    result.bands.push_back(std::move(band));
  }
  if (fit_d.size() >= 2) result.fit = stats::fit_power_law(fit_d, fit_k);
  return result;
}

namespace {

// Dorchester, Hastings, Hull, Blackpool: the dense South-East block's corners,
// as (lat, lon).
constexpr double kSouthEastPolygon[4][2] = {
    {50.71, -2.44},  // Dorchester
    {50.85, 0.57},   // Hastings
    {53.74, -0.33},  // Hull
    {53.81, -3.05},  // Blackpool
};

}  // namespace

UkRegion classify_region(double lat, double lon) {
  // ray cast in (lon, lat) coordinates
  bool inside = false;
  for (int i = 0, j = 3; i < 4; j = i++) {
    const double yi = kSouthEastPolygon[i][0], xi = kSouthEastPolygon[i][1];
    const double yj = kSouthEastPolygon[j][0], xj = kSouthEastPolygon[j][1];
    const bool crosses = (yi > lat) != (yj > lat);
    if (crosses && lon < (xj - xi) * (lat - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside ? UkRegion::SouthEast : UkRegion::NorthWest;
}

const char* region_name(UkRegion region) {
  return region == UkRegion::SouthEast ? "south-east" : "north-west";
}

double default_strip_width_km(UkRegion region) {
  return region == UkRegion::SouthEast ? 3.0 : 10.0;
}

}  // namespace roadlpp::ukdata
