#include <doctest.h>

#include <cmath>
#include <vector>

#include "roadlpp/errors.hpp"
#include "roadlpp/stats.hpp"

using namespace roadlpp;

TEST_CASE("wilson interval boundaries") {
  const auto zero = stats::wilson_interval(0, 100, 1.96);
  CHECK(zero.low == doctest::Approx(0.0).epsilon(1e-12));
  const auto full = stats::wilson_interval(100, 100, 1.96);
  CHECK(full.high == doctest::Approx(1.0).epsilon(1e-12));
  const auto half = stats::wilson_interval(50, 100, 1.96);
  CHECK(half.low == doctest::Approx(0.404).epsilon(2e-3));
  CHECK(half.high == doctest::Approx(0.596).epsilon(2e-3));
  CHECK_THROWS_AS(stats::wilson_interval(1, 0, 1.96), DomainError);
  CHECK_THROWS_AS(stats::wilson_interval(5, 4, 1.96), DomainError);
}

TEST_CASE("wilson interval contains the point estimate and shrinks") {
  for (std::int64_t trials : {10, 100, 1000}) {
    for (std::int64_t hits = 0; hits <= trials; hits += trials / 5) {
      const auto ci = stats::wilson_interval(hits, trials, 1.96);
      const double p = static_cast<double>(hits) / trials;
      CHECK(ci.low <= p + 1e-12);
      CHECK(ci.high >= p - 1e-12);
    }
  }
  const auto narrow = stats::wilson_interval(300, 1000, 1.96);
  const auto wide = stats::wilson_interval(30, 100, 1.96);
  CHECK(narrow.high - narrow.low < wide.high - wide.low);
}

TEST_CASE("power law fit exact laws") {
  const std::vector<double> xs = {8, 16, 32, 64};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(std::pow(x, -1.0 / 3.0));
  const auto fit = stats::fit_power_law(xs, ys);
  CHECK(fit.slope == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> flat = {3, 3, 3, 3};
  CHECK(stats::fit_power_law(xs, flat).slope == doctest::Approx(0.0).epsilon(1e-12));

  std::vector<double> quartic;
  for (double x : xs) quartic.push_back(2 * std::pow(x, 4.0));
  const auto q = stats::fit_power_law(xs, quartic);
  CHECK(q.slope == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(q.intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("power law fit validation") {
  CHECK_THROWS_AS(stats::fit_power_law(std::vector<double>{1}, std::vector<double>{1}),
                  DomainError);
  CHECK_THROWS_AS(stats::fit_power_law(std::vector<double>{1, 2}, std::vector<double>{1, -2}),
                  DomainError);
  CHECK_THROWS_AS(stats::fit_power_law(std::vector<double>{1, 1}, std::vector<double>{1, 2}),
                  DomainError);
}

TEST_CASE("power law fit is scale equivariant") {
  const std::vector<double> xs = {2, 5, 9, 17, 33};
  const std::vector<double> ys = {1.5, 4.1, 9.9, 14.0, 40.0};
  const auto base = stats::fit_power_law(xs, ys);
  std::vector<double> scaled;
  for (double y : ys) scaled.push_back(7.5 * y);
  const auto shifted = stats::fit_power_law(xs, scaled);
  CHECK(shifted.slope == doctest::Approx(base.slope).epsilon(1e-12));
  CHECK(shifted.intercept == doctest::Approx(base.intercept + std::log(7.5)).epsilon(1e-12));
}

TEST_CASE("median and moments") {
  CHECK(stats::median({3, 1, 2}) == 2);
  CHECK(stats::median({4, 1, 2, 3}) == doctest::Approx(2.5));
  CHECK_THROWS_AS(stats::median({}), DomainError);
  const std::vector<double> xs = {1, 2, 3, 4};
  CHECK(stats::mean(xs) == doctest::Approx(2.5));
  CHECK(stats::sample_sd(xs) == doctest::Approx(std::sqrt(5.0 / 3.0)));
}
