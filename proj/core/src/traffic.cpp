#include "roadlpp/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "roadlpp/parallel.hpp"

namespace roadlpp::traffic {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void require_epsilon(double epsilon) {
  if (!(epsilon > 0 && epsilon < std::numbers::pi / 4))
    throw DomainError("epsilon must lie in (0, pi/4)");
}

}  // namespace

DirectionField::DirectionField(Region region, double epsilon, std::uint64_t seed,
                               std::vector<double> thetas)
    : region_(region), epsilon_(epsilon), seed_(seed), thetas_(std::move(thetas)) {}

DirectionField DirectionField::sample(const Region& region, double epsilon, std::uint64_t seed) {
  require_epsilon(epsilon);
  std::vector<double> thetas(static_cast<std::size_t>(region.vertex_count()));
  const double span = kHalfPi - 2 * epsilon;
  std::size_t i = 0;
  for (Coord y = region.lo().y; y <= region.hi().y; ++y)
    for (Coord x = region.lo().x; x <= region.hi().x; ++x)
      thetas[i++] = epsilon + span * uniform_open01(vertex_hash(seed, x, y, /*stream=*/1));
  return DirectionField(region, epsilon, seed, std::move(thetas));
}

DirectionField DirectionField::from_constant(const Region& region, double epsilon, double theta) {
  require_epsilon(epsilon);
  if (!(theta > epsilon && theta < kHalfPi - epsilon))
    throw DomainError("constant direction outside (epsilon, pi/2 - epsilon)");
  return DirectionField(region, epsilon, 0,
                        std::vector<double>(static_cast<std::size_t>(region.vertex_count()), theta));
}

DirectionField DirectionField::from_values(const Region& region, double epsilon,
                                           std::vector<double> thetas) {
  require_epsilon(epsilon);
  if (thetas.size() != region.vertex_count())
    throw DomainError("from_values: value count does not match region vertex count");
  for (double t : thetas)
    if (!(t > epsilon && t < kHalfPi - epsilon))
      throw DomainError("from_values: direction outside (epsilon, pi/2 - epsilon)");
  return DirectionField(region, epsilon, 0, std::move(thetas));
}

Coord TrafficScenario::window_halfwidth(int depth) const {
  return static_cast<Coord>(
             std::ceil(width_factor * std::pow(static_cast<double>(depth), 2.0 / 3.0))) +
         window_pad;
}

void TrafficConfig::validate() const {
  require_epsilon(epsilon);
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  if (width_factor < 8.0) throw DomainError("width_factor must be >= 8");
  if (horizon_factor < 4.0) throw DomainError("horizon_factor must be >= 4");
  if (window_pad < 0) throw DomainError("window_pad must be >= 0");
  if (theta_bucket < 0) throw DomainError("theta_bucket must be >= 0");
}

Region scenario_region(const TrafficConfig& config, Coord scan_halfwidth) {
  config.validate();
  const double n_max = config.n_max;
  const double window_max =
      std::ceil(config.width_factor * std::pow(n_max, 2.0 / 3.0)) + config.window_pad;
  const double s = static_cast<double>(scan_halfwidth) + window_max;
  const double reach = std::ceil(config.horizon_factor * n_max * std::cos(config.epsilon)) + 1;
  const Coord lo = static_cast<Coord>(std::floor((-n_max - s) / 2.0)) - 2;
  const Coord hi = static_cast<Coord>(std::ceil(s / 2.0) + reach) + 2;
  return Region({lo, lo}, {hi, hi});
}

TrafficScenario make_scenario(const TrafficConfig& config, std::uint64_t trial_index,
                              Coord scan_halfwidth) {
  const Region region = scenario_region(config, scan_halfwidth);
  return TrafficScenario{
      .weights = WeightField::sample(region, derive_seed(config.master_seed, trial_index, 0)),
      .directions = DirectionField::sample(region, config.epsilon,
                                           derive_seed(config.master_seed, trial_index, 1)),
      .n_max = config.n_max,
      .width_factor = config.width_factor,
      .horizon_factor = config.horizon_factor,
      .window_pad = config.window_pad,
      .theta_bucket = config.theta_bucket,
      .tie = lpp::TiePolicy::Strict,
  };
}

namespace {

double bucketed_theta(double theta, double bucket, double epsilon) {
  if (bucket <= 0) return theta;
  const double lo = epsilon;
  const double snapped = lo + (std::floor((theta - lo) / bucket) + 0.5) * bucket;
  return std::min(std::max(snapped, epsilon), kHalfPi - epsilon);
}

struct CandidateWalk {
  const TrafficScenario& scenario;
  std::vector<double> scratch;

  /// Crossing vertex of the candidate's directed geodesic on the line
  /// phi = phi_stop. Throws TieError under the strict policy.
  Point crossing(Point u, Coord phi_stop) {
    const double theta = bucketed_theta(scenario.directions.at(u), scenario.theta_bucket,
                                        scenario.directions.epsilon());
    const Point target = lpp::directed_target(u, theta, scenario.horizon());
    lpp::detail::fill_forward_dp(scenario.weights, u, target, scratch);
    return lpp::detail::backtrack_to_phi(u, target, scratch, phi_stop, scenario.tie);
  }
};

void require_candidates_fit(const TrafficScenario& scenario, Point observer,
                            Coord scan_halfwidth) {
  const Region& region = scenario.weights.region();
  std::string offenders;
  int listed = 0;
  for (int n = 1; n <= scenario.n_max; ++n) {
    const Coord wn = scenario.window_halfwidth(n) + scan_halfwidth;
    for (const Point& u :
         line_points(phi_of(observer) - n, psi_of(observer) - wn, psi_of(observer) + wn)) {
      bool ok = region.contains(u);
      if (ok) {
        const double theta = bucketed_theta(scenario.directions.at(u), scenario.theta_bucket,
                                            scenario.directions.epsilon());
        ok = region.contains(lpp::directed_target(u, theta, scenario.horizon()));
      }
      if (!ok && listed < 8) {
        offenders += (listed ? ", " : "") + std::string("(") + std::to_string(u.x) + "," +
                     std::to_string(u.y) + ")";
        ++listed;
      }
    }
  }
  if (listed > 0)
    throw TruncationError("scenario box cannot decide geodesics from starts: " + offenders);
}

}  // namespace

CarFlowSample cars_through_point(const TrafficScenario& scenario, Point observer) {
  if (!scenario.weights.region().contains(observer))
    throw BoundsError("observer outside scenario region");
  require_candidates_fit(scenario, observer, 0);

  CarFlowSample sample;
  sample.observer = observer;
  sample.per_depth_counts.assign(static_cast<std::size_t>(scenario.n_max), 0);
  CandidateWalk walk{scenario, {}};
  const Coord phi_obs = phi_of(observer);
  for (int n = 1; n <= scenario.n_max; ++n) {
    const Coord wn = scenario.window_halfwidth(n);
    std::int64_t count = 0;
    for (const Point& u :
         line_points(phi_obs - n, psi_of(observer) - wn, psi_of(observer) + wn))
      if (walk.crossing(u, phi_obs) == observer) ++count;
    sample.per_depth_counts[static_cast<std::size_t>(n - 1)] = count;
    sample.total += count;
    if (count > 0) sample.depth = n;
  }
  return sample;
}

TrialBatch run_trials(const TrafficConfig& config, std::int64_t trials, int threads) {
  config.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  std::vector<std::optional<CarFlowSample>> slots(static_cast<std::size_t>(trials));
  std::vector<std::string> reasons(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t i) {
    try {
      const TrafficScenario scenario = make_scenario(config, static_cast<std::uint64_t>(i));
      slots[static_cast<std::size_t>(i)] = cars_through_point(scenario, {0, 0});
    } catch (const TieError& e) {
      reasons[static_cast<std::size_t>(i)] = e.what();
    } catch (const TruncationError& e) {
      reasons[static_cast<std::size_t>(i)] = e.what();
    }
  });
  TrialBatch batch;
  batch.samples.reserve(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      batch.samples.push_back(std::move(*slots[i]));
    } else {
      ++batch.aborted;
      if (batch.abort_reasons.size() < 8) batch.abort_reasons.push_back(reasons[i]);
    }
  }
  return batch;
}

namespace {

TailCurve tail_from_hits(const std::vector<std::int64_t>& n_values,
                         const std::vector<std::int64_t>& hits, std::int64_t trials, double z) {
  TailCurve curve;
  curve.reserve(n_values.size());
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    TailPoint pt;
    pt.n = n_values[i];
    pt.hits = hits[i];
    pt.trials = trials;
    pt.p_hat = trials > 0 ? static_cast<double>(hits[i]) / static_cast<double>(trials) : 0.0;
    const auto ci = stats::wilson_interval(hits[i], std::max<std::int64_t>(trials, 1), z);
    pt.ci_low = ci.low;
    pt.ci_high = ci.high;
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace

TailCurve tail_curve_depth(const std::vector<CarFlowSample>& samples,
                           const std::vector<std::int64_t>& n_values, double z) {
  std::vector<std::int64_t> hits(n_values.size(), 0);
  for (const CarFlowSample& s : samples)
    for (std::size_t i = 0; i < n_values.size(); ++i)
      if (s.depth >= n_values[i]) ++hits[i];
  return tail_from_hits(n_values, hits, static_cast<std::int64_t>(samples.size()), z);
}

TailCurve tail_curve_total(const std::vector<CarFlowSample>& samples,
                           const std::vector<std::int64_t>& n_values, double z) {
  std::vector<std::int64_t> hits(n_values.size(), 0);
  for (const CarFlowSample& s : samples)
    for (std::size_t i = 0; i < n_values.size(); ++i) {
      const double threshold = std::pow(static_cast<double>(n_values[i]), 4.0 / 3.0);
      if (static_cast<double>(s.total) >= threshold) ++hits[i];
    }
  return tail_from_hits(n_values, hits, static_cast<std::int64_t>(samples.size()), z);
}

TailCurve estimate_tail_D(const TrafficConfig& config, const std::vector<std::int64_t>& n_values,
                          std::int64_t trials, int threads) {
  for (std::int64_t n : n_values)
    if (n > config.n_max) throw DomainError("tail scale exceeds scenario n_max");
  return tail_curve_depth(run_trials(config, trials, threads).samples, n_values);
}

TailCurve estimate_tail_N(const TrafficConfig& config, const std::vector<std::int64_t>& n_values,
                          std::int64_t trials, int threads) {
  for (std::int64_t n : n_values)
    if (n > config.n_max) throw DomainError("tail scale exceeds scenario n_max");
  return tail_curve_total(run_trials(config, trials, threads).samples, n_values);
}

std::vector<DepthMean> mean_per_depth(const std::vector<CarFlowSample>& samples,
                                      const std::vector<std::int64_t>& n_values) {
  std::vector<DepthMean> out;
  out.reserve(n_values.size());
  for (std::int64_t n : n_values) {
    std::vector<double> counts;
    counts.reserve(samples.size());
    for (const CarFlowSample& s : samples)
      counts.push_back(static_cast<double>(s.count_at_depth(static_cast<int>(n))));
    DepthMean m;
    m.n = n;
    m.mean = stats::mean(counts);
    m.se = counts.size() > 1
               ? stats::sample_sd(counts) / std::sqrt(static_cast<double>(counts.size()))
               : 0.0;
    m.trials = static_cast<std::int64_t>(counts.size());
    out.push_back(m);
  }
  return out;
}

void TnConfig::validate() const {
  base.validate();
  if (n < 1) throw DomainError("T_n scale must be >= 1");
  if (ell0 <= 0) throw DomainError("ell0 must be positive");
  if (scan_factor <= 0) throw DomainError("scan_factor must be positive");
  if (depth_factor < 1) throw DomainError("depth_factor must be >= 1");
}

TnResult estimate_T_n(const TnConfig& config, std::int64_t trials, int threads) {
  config.validate();
  if (trials < 1) throw DomainError("trials must be >= 1");
  TrafficConfig scenario_config = config.base;
  scenario_config.n_max =
      static_cast<int>(std::ceil(config.depth_factor * static_cast<double>(config.n)));
  const Coord scan = static_cast<Coord>(
      std::ceil(config.scan_factor * std::cbrt(static_cast<double>(config.n))));
  const double threshold = std::pow(static_cast<double>(config.n), 4.0 / 3.0) / config.ell0;

  constexpr double kCensored = -1.0;
  std::vector<double> slots(static_cast<std::size_t>(trials), kCensored);
  std::vector<char> ok(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, threads, [&](std::int64_t i) {
    try {
      const TrafficScenario scenario =
          make_scenario(scenario_config, static_cast<std::uint64_t>(i), scan);
      require_candidates_fit(scenario, {0, 0}, scan);
      // one pass over all candidates tallies N_v for every observer v on
      // phi = 0 with |psi(v)| <= scan
      const Coord buckets = scan / 2 + 1;  // psi is even on phi = 0
      std::vector<std::int64_t> pos(static_cast<std::size_t>(buckets), 0);
      std::vector<std::int64_t> neg(static_cast<std::size_t>(buckets), 0);
      CandidateWalk walk{scenario, {}};
      for (int m = 1; m <= scenario.n_max; ++m) {
        const Coord wn = scenario.window_halfwidth(m);
        for (const Point& u : line_points(-m, -(scan + wn), scan + wn)) {
          const Point c = walk.crossing(u, 0);
          const Coord psi_c = psi_of(c);
          if (std::llabs(psi_c) > scan) continue;
          if (std::llabs(psi_of(u) - psi_c) > wn) continue;  // outside v's own window
          if (psi_c >= 0) ++pos[static_cast<std::size_t>(psi_c / 2)];
          if (psi_c <= 0) ++neg[static_cast<std::size_t>(-psi_c / 2)];
        }
      }
      double t_n = kCensored;
      for (Coord b = 0; b < buckets; ++b) {
        const double n_pos = static_cast<double>(pos[static_cast<std::size_t>(b)]);
        const double n_neg = static_cast<double>(neg[static_cast<std::size_t>(b)]);
        if (n_pos >= threshold || n_neg >= threshold) {
          t_n = static_cast<double>(2 * b);
          break;
        }
      }
      slots[static_cast<std::size_t>(i)] = t_n;
      ok[static_cast<std::size_t>(i)] = 1;
    } catch (const TieError&) {
    } catch (const TruncationError&) {
    }
  });

  TnResult result;
  result.threshold = threshold;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!ok[i]) {
      ++result.aborted;
      continue;
    }
    ++result.trials;
    result.samples.push_back(slots[i]);
    if (slots[i] == kCensored) ++result.censored;
  }
  const std::int64_t accepted = result.trials;
  for (Coord t = 0; t <= scan; t += 2) {
    TnCdfRow row;
    row.t = static_cast<double>(t);
    for (double s : result.samples)
      if (s != kCensored && s <= row.t) ++row.hits;
    row.p_hat = accepted > 0 ? static_cast<double>(row.hits) / static_cast<double>(accepted) : 0.0;
    if (accepted > 0) {
      const auto ci = stats::wilson_interval(row.hits, accepted, 1.96);
      row.ci_low = ci.low;
      row.ci_high = ci.high;
    }
    result.cdf.push_back(row);
  }
  return result;
}

}  // namespace roadlpp::traffic
