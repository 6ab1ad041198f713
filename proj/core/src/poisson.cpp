#include "roadlpp/poisson.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "roadlpp/errors.hpp"
#include "roadlpp/parallel.hpp"
#include "roadlpp/rng.hpp"

namespace roadlpp::poisson {

namespace {
constexpr double kTwoPi = 2 * std::numbers::pi;
}

void PoissonModelConfig::validate() const {
  if (!(r > 0)) throw DomainError("disc radius must be positive");
  if (!(gamma > 0)) throw DomainError("trip-length rate must be positive");
  if (trials < 1) throw DomainError("trials must be >= 1");
  if (window_radius != 0.0 && window_radius < r)
    throw DomainError("window radius must be >= disc radius");
}

bool hits_disc(double z, double theta, double ell, double r) {
  if (z < 0 || r <= 0 || ell < 0) throw DomainError("hits_disc: bad geometry arguments");
  if (z <= r) return true;
  const double s = std::sin(theta);
  if (std::abs(s) > r / z) return false;
  const double c = std::cos(theta);
  const double chord = std::sqrt(r * r - z * z * s * s);
  if (z * c + chord < 0) return false;  // both crossings behind the start
  return ell >= z * c - chord;
}

double poisson_lower_bound(double r, double gamma) {
  if (!(r > 0) || !(gamma > 0)) throw DomainError("poisson_lower_bound needs positive r, gamma");
  return std::numbers::pi * r * r + (2 * r / gamma) * std::exp(-gamma * r);
}

double window_tail_bound(double r, double gamma, double window_radius) {
  return (2 * r / gamma) * std::exp(-gamma * (window_radius - r));
}

double auto_window_radius(double r, double gamma, double tail) {
  return r + std::log((2 * r / gamma) / tail) / gamma;
}

std::vector<std::int64_t> simulate_N_r(const PoissonModelConfig& config, int threads) {
  config.validate();
  const double window =
      config.window_radius > 0 ? config.window_radius : auto_window_radius(config.r, config.gamma);
  const double mean_points = std::numbers::pi * window * window;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(config.trials), 0);
  parallel_for(config.trials, threads, [&](std::int64_t trial) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(trial), 0));
    std::poisson_distribution<std::int64_t> n_points(mean_points);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::int64_t k = n_points(rng);
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < k; ++i) {
      const double z = window * std::sqrt(unit(rng));  // uniform in the disc
      const double position_angle = kTwoPi * unit(rng);
      const double direction = kTwoPi * unit(rng);
      const double ell = -std::log1p(-unit(rng)) / config.gamma;
      // relative angle of the trip against the car-to-origin direction
      const double theta = direction - (position_angle + std::numbers::pi);
      if (hits_disc(z, theta, ell, config.r)) ++hits;
    }
    counts[static_cast<std::size_t>(trial)] = hits;
  });
  return counts;
}

}  // namespace roadlpp::poisson
