#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "roadlpp/lattice.hpp"
#include "roadlpp/lpp.hpp"
#include "roadlpp/stats.hpp"

namespace roadlpp::traffic {

/// Immutable field of i.i.d. Uniform(eps, pi/2 - eps) directions, one per
/// vertex, counter-based like WeightField and independent of it.
class DirectionField {
 public:
  static DirectionField sample(const Region& region, double epsilon, std::uint64_t seed);
  static DirectionField from_constant(const Region& region, double epsilon, double theta);
  /// Test fixture constructor, row-major like WeightField::from_values.
  static DirectionField from_values(const Region& region, double epsilon,
                                    std::vector<double> thetas);

  const Region& region() const { return region_; }
  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }

  double at(Point p) const {
    if (!region_.contains(p)) throw BoundsError("direction lookup outside field region");
    return thetas_[region_.index(p)];
  }

 private:
  DirectionField(Region region, double epsilon, std::uint64_t seed, std::vector<double> thetas);

  Region region_;
  double epsilon_;
  std::uint64_t seed_;
  std::vector<double> thetas_;
};

/// One truncated realization of the car model around an observer: weights,
/// directions, a depth cutoff, and the box-sizing factors that keep every
/// candidate geodesic decidable inside the region.
struct TrafficScenario {
  WeightField weights;
  DirectionField directions;
  int n_max = 0;
  double width_factor = 8.0;    // candidate window half-width is width_factor * n^{2/3} + pad
  double horizon_factor = 4.0;  // directed-geodesic horizon is horizon_factor * n_max
  int window_pad = 4;
  double theta_bucket = 0.0;    // 0 = exact per-car directions
  lpp::TiePolicy tie = lpp::TiePolicy::Strict;

  double horizon() const { return horizon_factor * n_max; }
  Coord window_halfwidth(int depth) const;
};

/// Cars through one observer, bucketed by the phi-distance of their start.
struct CarFlowSample {
  Point observer;
  std::vector<std::int64_t> per_depth_counts;  // index n-1 holds N_n
  std::int64_t total = 0;                      // truncated N
  int depth = 0;                               // truncated D, 0 if no car
  bool truncated = false;

  std::int64_t count_at_depth(int n) const { return per_depth_counts[static_cast<std::size_t>(n - 1)]; }
};

struct TrafficConfig {
  double epsilon = 0.2;
  int n_max = 16;
  double width_factor = 8.0;
  double horizon_factor = 4.0;
  int window_pad = 4;
  std::uint64_t master_seed = 1;
  /// Optional accelerator: quantize each car's direction to a bucket of this
  /// width (radians) before aiming its finite-horizon geodesic. 0 = exact.
  double theta_bucket = 0.0;

  void validate() const;
};

/// Region large enough that every candidate start, its directed target and
/// the DP rectangle between them fit, for observers with |psi| <= scan_halfwidth
/// on the line phi = 0.
Region scenario_region(const TrafficConfig& config, Coord scan_halfwidth = 0);

/// Scenario for trial `trial_index`, observer at the origin; weight and
/// direction seeds derive from (master_seed, trial_index).
TrafficScenario make_scenario(const TrafficConfig& config, std::uint64_t trial_index,
                              Coord scan_halfwidth = 0);

/// Counts, for each depth n in 1..n_max, the cars starting on the line
/// phi(observer) - n inside the candidate window whose finite-horizon directed
/// geodesic passes through the observer.
CarFlowSample cars_through_point(const TrafficScenario& scenario, Point observer);

struct TailPoint {
  std::int64_t n = 0;
  std::int64_t hits = 0;
  std::int64_t trials = 0;
  double p_hat = 0;
  double ci_low = 0;
  double ci_high = 0;
};
using TailCurve = std::vector<TailPoint>;

struct TrialBatch {
  std::vector<CarFlowSample> samples;  // accepted trials, in trial order
  std::int64_t aborted = 0;            // tie/truncation aborts, counted separately
  std::vector<std::string> abort_reasons;  // first few, for reporting
};

TrialBatch run_trials(const TrafficConfig& config, std::int64_t trials, int threads);

TailCurve tail_curve_depth(const std::vector<CarFlowSample>& samples,
                           const std::vector<std::int64_t>& n_values, double z = 1.96);
/// Tail of the truncated total car count at thresholds n^{4/3}.
TailCurve tail_curve_total(const std::vector<CarFlowSample>& samples,
                           const std::vector<std::int64_t>& n_values, double z = 1.96);

TailCurve estimate_tail_D(const TrafficConfig& config, const std::vector<std::int64_t>& n_values,
                          std::int64_t trials, int threads);
TailCurve estimate_tail_N(const TrafficConfig& config, const std::vector<std::int64_t>& n_values,
                          std::int64_t trials, int threads);

struct DepthMean {
  std::int64_t n = 0;
  double mean = 0;
  double se = 0;
  std::int64_t trials = 0;
};
std::vector<DepthMean> mean_per_depth(const std::vector<CarFlowSample>& samples,
                                      const std::vector<std::int64_t>& n_values);

struct TnConfig {
  TrafficConfig base;       // n_max is derived from n and depth_factor
  std::int64_t n = 8;
  double ell0 = 1.0;        // threshold is n^{4/3} / ell0
  double scan_factor = 1.0; // observers scanned over |psi| <= scan_factor * n^{1/3}
  double depth_factor = 2.0;

  void validate() const;
};

struct TnCdfRow {
  double t = 0;       // |psi| distance along the line phi = 0
  std::int64_t hits = 0;
  double p_hat = 0;
  double ci_low = 0;
  double ci_high = 0;
};

struct TnResult {
  std::vector<TnCdfRow> cdf;       // nondecreasing in t
  std::int64_t trials = 0;
  std::int64_t censored = 0;       // no qualifying vertex inside the scan
  std::int64_t aborted = 0;
  double threshold = 0;            // cars needed for a vertex to qualify
  std::vector<double> samples;     // per accepted trial: T_n, or -1 if censored
};

/// Empirical distribution of the distance to the nearest busy vertex:
/// per trial, the smallest |psi(v)| over v on phi=0 with N_v >= n^{4/3}/ell0.
TnResult estimate_T_n(const TnConfig& config, std::int64_t trials, int threads);

}  // namespace roadlpp::traffic
