#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roadlpp/stats.hpp"

namespace roadlpp::ukdata {

/// One traffic count point: annual average daily flow at a road location.
struct CountPoint {
  double lat = 0;
  double lon = 0;
  double flow = 0;
  std::string road_id;
};

/// Column names to look up in the input CSV header.
struct ColumnMap {
  std::string lat = "latitude";
  std::string lon = "longitude";
  std::string flow = "all_motor_vehicles";
  std::string road = "road_name";  // optional column; empty id when absent
};

struct LoadReport {
  std::int64_t parsed = 0;
  std::int64_t dropped_missing = 0;  // empty coordinate or flow fields
  std::int64_t dropped_invalid = 0;  // out-of-range coordinates, negative flow
};

/// Parses count points from CSV. Rows with missing or invalid mandatory
/// fields are dropped and counted in the report.
std::vector<CountPoint> load_count_points(std::istream& in, const ColumnMap& columns,
                                          LoadReport* report = nullptr);

constexpr double kKmPerDegree = 111.32;

struct StripObservation {
  double distance_km = 0;  // eastward from the startpoint
  double flow = 0;
};

/// Count points inside the strip of the given width around the Easterly line
/// from (lat0, lon0), up to length_km east, ordered by distance. Uses the
/// locally flat equirectangular conversion around the startpoint.
std::vector<StripObservation> strip_select(std::span<const CountPoint> points, double lat0,
                                           double lon0, double width_km, double length_km);

struct RunningMaxCurve {
  std::vector<double> distance_km;  // strictly... nondecreasing, duplicates kept
  std::vector<double> flow;
  std::vector<double> running_max;  // nondecreasing

  bool empty() const { return distance_km.empty(); }
  std::size_t size() const { return distance_km.size(); }
};

/// Cumulative maximum of flows along the strip; observations must be sorted.
RunningMaxCurve running_max(std::span<const StripObservation> observations);

/// Fraction of curves whose running maximum within distance d reaches >= k.
double exceedance_frequency(std::span<const RunningMaxCurve> curves, double d_km, double k);

/// Per-curve running maximum within distance d, sorted descending; curves
/// with no observation that close are omitted.
std::vector<double> maxima_within(std::span<const RunningMaxCurve> curves, double d_km);

/// Geometric grid of thresholds to scan.
struct ThresholdScan {
  double k_min = 1000;
  double k_max = 100000;
  int k_count = 512;
};

struct ThresholdBand {
  double d_km = 0;
  std::vector<double> ks;  // grid thresholds whose frequency falls in the band
  double k_mid = 0;        // geometric mean of ks; 0 when the band is empty
};

struct ThresholdCurve {
  std::vector<ThresholdBand> bands;
  std::optional<stats::PowerLawFit> fit;  // log k_mid vs log d, set when >= 2 bands
  std::int64_t empty_bands = 0;
};

/// For each distance, the thresholds whose exceedance frequency falls inside
/// the open band, plus a power-law fit of the band midpoints against distance.
ThresholdCurve median_threshold_curve(std::span<const RunningMaxCurve> curves,
                                      std::span<const double> d_values,
                                      std::pair<double, double> freq_band = {0.49, 0.51},
                                      const ThresholdScan& scan = {});

enum class UkRegion { SouthEast, NorthWest };

/// Classification against the dense South-East block, approximated by the
/// quadrilateral Dorchester - Hastings - Hull - Blackpool.
UkRegion classify_region(double lat, double lon);
const char* region_name(UkRegion region);
double default_strip_width_km(UkRegion region);

}  // namespace roadlpp::ukdata
