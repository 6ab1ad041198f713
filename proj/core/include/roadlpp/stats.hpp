#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace roadlpp::stats {

struct ConfidenceInterval {
  double low = 0;
  double high = 0;
};

/// Wilson score interval for a binomial proportion.
ConfidenceInterval wilson_interval(std::int64_t hits, std::int64_t trials, double z);

struct PowerLawFit {
  double slope = 0;
  double intercept = 0;  // intercept of log y vs log x, natural logs
  double r_squared = 0;
  std::int64_t n_points = 0;
};

/// Least squares on (log x, log y). Inputs must be strictly positive and of
/// equal length >= 2 with at least two distinct abscissae.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

double mean(std::span<const double> xs);
double sample_sd(std::span<const double> xs);
double median(std::vector<double> xs);  // by value, sorts its copy

}  // namespace roadlpp::stats
