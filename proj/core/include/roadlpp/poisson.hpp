#pragma once

#include <cstdint>
#include <vector>

namespace roadlpp::poisson {

/// Straight-line car model on the plane: unit-intensity Poisson starting
/// points, Uniform[0, 2pi) directions, Exponential(gamma) trip lengths.
struct PoissonModelConfig {
  double r = 1.0;              // disc radius around the origin
  double gamma = 1.0;          // trip-length rate
  double window_radius = 0.0;  // 0 = auto-size from the tail bound
  std::uint64_t seed = 1;
  std::int64_t trials = 100;

  void validate() const;
};

/// Whether a trip of length ell from distance z, at angle theta measured from
/// the car-to-origin direction, intersects the disc of radius r.
bool hits_disc(double z, double theta, double ell, double r);

/// Closed-form lower bound on the mean number of cars entering the disc:
/// pi r^2 + (2 r / gamma) e^{-gamma r}.
double poisson_lower_bound(double r, double gamma);

/// Expected number of cars starting beyond the window that would still reach
/// the disc; the truncation error the window introduces.
double window_tail_bound(double r, double gamma, double window_radius);

/// Smallest window radius with window_tail_bound below `tail`.
double auto_window_radius(double r, double gamma, double tail = 1e-6);

/// Per-trial counts of cars whose trips intersect the disc.
std::vector<std::int64_t> simulate_N_r(const PoissonModelConfig& config, int threads = 1);

}  // namespace roadlpp::poisson
