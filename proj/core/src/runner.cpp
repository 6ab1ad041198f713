#include "roadlpp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "roadlpp/csv.hpp"
#include "roadlpp/errors.hpp"
#include "roadlpp/fluctuation.hpp"
#include "roadlpp/lattice.hpp"
#include "roadlpp/lpp.hpp"
#include "roadlpp/parallel.hpp"
#include "roadlpp/poisson.hpp"
#include "roadlpp/sha256.hpp"
#include "roadlpp/stats.hpp"
#include "roadlpp/svg.hpp"
#include "roadlpp/terrain.hpp"
#include "roadlpp/traffic.hpp"
#include "roadlpp/ukdata.hpp"
#include "roadlpp/version.hpp"

namespace roadlpp::runner {

namespace {

using nlohmann::json;

std::string fd(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Schema-checked view of a config object: every accessor marks its key as
/// known, and finish() rejects anything left over.
class ConfigView {
 public:
  explicit ConfigView(const json& j) : j_(j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
  }

  std::int64_t get_int(const std::string& key, std::optional<std::int64_t> fallback = {}) {
    const json* v = fetch(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number_integer()) throw ValidationError("config key '" + key + "' must be an integer");
    return v->get<std::int64_t>();
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) {
    const json* v = fetch(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_number()) throw ValidationError("config key '" + key + "' must be a number");
    return v->get<double>();
  }

  bool get_bool(const std::string& key, std::optional<bool> fallback = {}) {
    const json* v = fetch(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_boolean()) throw ValidationError("config key '" + key + "' must be a boolean");
    return v->get<bool>();
  }

  std::string get_string(const std::string& key, std::optional<std::string> fallback = {}) {
    const json* v = fetch(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_string()) throw ValidationError("config key '" + key + "' must be a string");
    return v->get<std::string>();
  }

  std::vector<std::int64_t> get_int_array(const std::string& key) {
    const json* v = fetch(key, false);
    if (!v->is_array() || v->empty()) throw ValidationError("config key '" + key + "' must be a nonempty array");
    std::vector<std::int64_t> out;
    for (const json& e : *v) {
      if (!e.is_number_integer()) throw ValidationError("config key '" + key + "' must hold integers");
      out.push_back(e.get<std::int64_t>());
    }
    return out;
  }

  std::vector<double> get_double_array(const std::string& key,
                                       std::optional<std::vector<double>> fallback = {}) {
    const json* v = fetch(key, fallback.has_value());
    if (!v) return *fallback;
    if (!v->is_array() || v->empty()) throw ValidationError("config key '" + key + "' must be a nonempty array");
    std::vector<double> out;
    for (const json& e : *v) {
      if (!e.is_number()) throw ValidationError("config key '" + key + "' must hold numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  ConfigView get_object(const std::string& key) {
    known_.insert(key);
    if (!j_.contains(key)) return ConfigView(empty_);
    if (!j_.at(key).is_object()) throw ValidationError("config key '" + key + "' must be an object");
    return ConfigView(j_.at(key));
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!known_.count(it.key())) throw ValidationError("unknown config key '" + it.key() + "'");
  }

 private:
  const json* fetch(const std::string& key, bool optional) {
    known_.insert(key);
    if (!j_.contains(key)) {
      if (optional) return nullptr;
      throw ValidationError("config key '" + key + "' is required");
    }
    return &j_.at(key);
  }

  static const json empty_;
  const json& j_;
  std::set<std::string> known_;
};

const json ConfigView::empty_ = json::object();

struct OutputFile {
  std::string name;
  std::string content;
};

using Outputs = std::vector<OutputFile>;

struct CommandContext {
  json config;
  int threads = 1;
  std::uint64_t master_seed = 1;
  int extra_exit = kExitOk;  // kExitCensoredOnly when only censored data came out
};

// ---------------------------------------------------------------------------
// traffic

traffic::TrafficConfig traffic_config_from(ConfigView& cfg, std::uint64_t master_seed,
                                           int default_n_max) {
  traffic::TrafficConfig tc;
  tc.epsilon = cfg.get_double("epsilon", 0.2);
  tc.n_max = static_cast<int>(cfg.get_int("n_max", default_n_max));
  tc.width_factor = cfg.get_double("width_factor", 8.0);
  tc.horizon_factor = cfg.get_double("horizon_factor", 4.0);
  tc.window_pad = static_cast<int>(cfg.get_int("window_pad", 4));
  tc.theta_bucket = cfg.get_double("theta_bucket", 0.0);
  tc.master_seed = master_seed;
  tc.validate();
  return tc;
}

std::string tail_curve_csv(const traffic::TailCurve& curve) {
  std::ostringstream out;
  out << "n,hits,trials,p_hat,ci_low,ci_high\n";
  for (const traffic::TailPoint& p : curve)
    out << p.n << ',' << p.hits << ',' << p.trials << ',' << fd(p.p_hat) << ',' << fd(p.ci_low)
        << ',' << fd(p.ci_high) << '\n';
  return out.str();
}

Outputs run_traffic_tails(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::vector<std::int64_t> n_values = cfg.get_int_array("n_values");
  const std::int64_t trials = cfg.get_int("trials");
  const std::int64_t max_n = *std::max_element(n_values.begin(), n_values.end());
  const traffic::TrafficConfig tc =
      traffic_config_from(cfg, ctx.master_seed, static_cast<int>(max_n));
  cfg.finish();
  if (trials < 1) throw ValidationError("trials must be >= 1");
  for (std::int64_t n : n_values)
    if (n > tc.n_max) throw ValidationError("n_values must not exceed n_max");

  const traffic::TrialBatch batch = traffic::run_trials(tc, trials, ctx.threads);
  if (batch.samples.empty()) throw Error("all trials aborted");
  const traffic::TailCurve d_curve = traffic::tail_curve_depth(batch.samples, n_values);
  const traffic::TailCurve n_curve = traffic::tail_curve_total(batch.samples, n_values);

  json summary;
  summary["trials_requested"] = trials;
  summary["trials_accepted"] = static_cast<std::int64_t>(batch.samples.size());
  summary["trials_aborted"] = batch.aborted;
  summary["abort_reasons"] = batch.abort_reasons;
  // truncated N omits depths beyond n_max; the omitted mass scales like n_max^{-1/3}
  summary["omitted_depth_mass_scale"] = std::pow(static_cast<double>(tc.n_max), -1.0 / 3.0);
  summary["n_max"] = tc.n_max;
  // grows linearly with n_max (each depth contributes mean 1); the
  // untruncated mean diverges
  double total_cars = 0;
  for (const traffic::CarFlowSample& s : batch.samples)
    total_cars += static_cast<double>(s.total);
  summary["mean_truncated_N"] = total_cars / static_cast<double>(batch.samples.size());
  return {{"tail_D.csv", tail_curve_csv(d_curve)},
          {"tail_N.csv", tail_curve_csv(n_curve)},
          {"summary.json", summary.dump(2) + "\n"}};
}

Outputs run_traffic_mean_nn(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::vector<std::int64_t> n_values = cfg.get_int_array("n_values");
  const std::int64_t trials = cfg.get_int("trials");
  const std::int64_t max_n = *std::max_element(n_values.begin(), n_values.end());
  const traffic::TrafficConfig tc =
      traffic_config_from(cfg, ctx.master_seed, static_cast<int>(max_n));
  cfg.finish();
  if (trials < 1) throw ValidationError("trials must be >= 1");
  for (std::int64_t n : n_values)
    if (n > tc.n_max || n < 1) throw ValidationError("n_values must lie in [1, n_max]");

  const traffic::TrialBatch batch = traffic::run_trials(tc, trials, ctx.threads);
  if (batch.samples.empty()) throw Error("all trials aborted");
  const std::vector<traffic::DepthMean> means = traffic::mean_per_depth(batch.samples, n_values);
  std::ostringstream out;
  out << "n,mean,se,trials\n";
  for (const traffic::DepthMean& m : means)
    out << m.n << ',' << fd(m.mean) << ',' << fd(m.se) << ',' << m.trials << '\n';
  json summary;
  summary["trials_accepted"] = static_cast<std::int64_t>(batch.samples.size());
  summary["trials_aborted"] = batch.aborted;
  return {{"mean_Nn.csv", out.str()}, {"summary.json", summary.dump(2) + "\n"}};
}

Outputs run_traffic_tn(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  traffic::TnConfig tn;
  tn.n = cfg.get_int("n");
  const std::int64_t trials = cfg.get_int("trials");
  tn.ell0 = cfg.get_double("ell0", 1.0);
  tn.scan_factor = cfg.get_double("scan_factor", 4.0);
  tn.depth_factor = cfg.get_double("depth_factor", 2.0);
  tn.base = traffic_config_from(cfg, ctx.master_seed, /*default n_max; derived later*/ 1);
  cfg.finish();
  if (trials < 1) throw ValidationError("trials must be >= 1");
  tn.validate();

  const traffic::TnResult result = traffic::estimate_T_n(tn, trials, ctx.threads);
  std::ostringstream out;
  out << "t,hits,trials,p_hat,ci_low,ci_high\n";
  for (const traffic::TnCdfRow& row : result.cdf)
    out << fd(row.t) << ',' << row.hits << ',' << result.trials << ',' << fd(row.p_hat) << ','
        << fd(row.ci_low) << ',' << fd(row.ci_high) << '\n';
  json summary;
  summary["n"] = tn.n;
  summary["ell0"] = tn.ell0;
  summary["threshold_cars"] = result.threshold;
  summary["trials_accepted"] = result.trials;
  summary["trials_aborted"] = result.aborted;
  summary["censored"] = result.censored;
  if (result.trials > 0 && result.censored == result.trials) ctx.extra_exit = kExitCensoredOnly;
  return {{"tn_cdf.csv", out.str()}, {"summary.json", summary.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------
// fluctuation / coalescence

Outputs run_fluctuation(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const double theta = cfg.get_double("theta");
  const std::vector<std::int64_t> t_values = cfg.get_int_array("T_values");
  const std::int64_t seeds = cfg.get_int("seeds");
  const double horizon_factor = cfg.get_double("horizon_factor", 2.0);
  cfg.finish();
  if (!(theta > 0 && theta < std::numbers::pi / 2))
    throw ValidationError("theta must lie in (0, pi/2)");
  if (seeds < 1) throw ValidationError("seeds must be >= 1");
  if (horizon_factor * (std::cos(theta) + std::sin(theta)) <= 1.0)
    throw ValidationError("horizon_factor too small to reach the measurement line");
  for (std::int64_t t : t_values)
    if (t < 1) throw ValidationError("T_values must be >= 1");

  const std::int64_t t_max = *std::max_element(t_values.begin(), t_values.end());
  const double horizon_max = horizon_factor * static_cast<double>(t_max);
  const Coord reach = static_cast<Coord>(std::ceil(horizon_max)) + 2;
  const Region region({-2, -2}, {reach, reach});

  struct Row {
    std::int64_t t, seed;
    double dev, sup_dev;
  };
  std::vector<Row> rows(static_cast<std::size_t>(seeds * static_cast<std::int64_t>(t_values.size())));
  parallel_for(seeds, ctx.threads, [&](std::int64_t s) {
    const WeightField field =
        WeightField::sample(region, derive_seed(ctx.master_seed, static_cast<std::uint64_t>(s), 0));
    for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
      const std::int64_t T = t_values[ti];
      const fluctuation::FluctuationSample sample = fluctuation::transversal_fluctuation(
          field, theta, T, horizon_factor * static_cast<double>(T));
      rows[static_cast<std::size_t>(s) * t_values.size() + ti] =
          Row{T, s, sample.deviation_at_T, sample.sup_deviation};
    }
  });

  std::ostringstream out;
  out << "theta,T,seed,dev,sup_dev\n";
  for (const Row& r : rows)
    out << fd(theta) << ',' << r.t << ',' << r.seed << ',' << fd(r.dev) << ',' << fd(r.sup_dev)
        << '\n';

  json summary;
  std::vector<double> fit_t, fit_med;
  for (std::int64_t T : t_values) {
    std::vector<double> sups;
    for (const Row& r : rows)
      if (r.t == T) sups.push_back(r.sup_dev);
    const double med = stats::median(sups);
    summary["median_sup_dev"][std::to_string(T)] = med;
    if (med > 0) {
      fit_t.push_back(static_cast<double>(T));
      fit_med.push_back(med);
    }
  }
  if (fit_t.size() >= 2) {
    const stats::PowerLawFit fit = stats::fit_power_law(fit_t, fit_med);
    summary["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"r_squared", fit.r_squared},
                      {"n_points", fit.n_points}};
  }
  summary["theta"] = theta;
  summary["seeds"] = seeds;
  return {{"fluctuation.csv", out.str()}, {"summary.json", summary.dump(2) + "\n"}};
}

Outputs run_coalescence(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::int64_t n = cfg.get_int("n");
  const std::int64_t k = cfg.get_int("k", 0);
  const std::int64_t seeds = cfg.get_int("seeds");
  const std::int64_t halfwidth = cfg.get_int(
      "segment_halfwidth",
      static_cast<std::int64_t>(std::ceil(std::pow(static_cast<double>(std::max<std::int64_t>(n, 1)), 2.0 / 3.0))));
  const std::int64_t mesh_step = cfg.get_int("mesh_step", 4);
  cfg.finish();
  if (n < 3) throw ValidationError("n must be >= 3");
  if (seeds < 1) throw ValidationError("seeds must be >= 1");
  if (mesh_step < 1) throw ValidationError("mesh_step must be >= 1");

  // region covering both segments and the rectangles between them
  const double shift = std::abs(static_cast<double>(k)) * std::pow(static_cast<double>(n), 2.0 / 3.0);
  const Coord spread = 2 * static_cast<Coord>(std::ceil(shift)) + halfwidth + 4;
  const Region region({-spread, -spread}, {2 * n + spread, 2 * n + spread});

  std::vector<std::int64_t> counts(static_cast<std::size_t>(seeds), 0);
  parallel_for(seeds, ctx.threads, [&](std::int64_t s) {
    const WeightField field =
        WeightField::sample(region, derive_seed(ctx.master_seed, static_cast<std::uint64_t>(s), 0));
    counts[static_cast<std::size_t>(s)] =
        fluctuation::coalescence_classes(field, n, k, halfwidth, static_cast<int>(mesh_step))
            .class_count;
  });

  std::ostringstream out;
  out << "n,k,seed,class_count\n";
  for (std::int64_t s = 0; s < seeds; ++s)
    out << n << ',' << k << ',' << s << ',' << counts[static_cast<std::size_t>(s)] << '\n';

  json summary;
  for (std::int64_t ell = 1; ell <= 10; ++ell) {
    std::int64_t hits = 0;
    for (std::int64_t c : counts)
      if (c >= ell) ++hits;
    summary["freq_at_least"][std::to_string(ell)] =
        static_cast<double>(hits) / static_cast<double>(seeds);
  }
  summary["mesh_step"] = mesh_step;
  summary["segment_halfwidth"] = halfwidth;
  return {{"coalescence.csv", out.str()}, {"summary.json", summary.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------
// poisson

Outputs run_poisson(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  poisson::PoissonModelConfig pc;
  pc.r = cfg.get_double("r");
  pc.gamma = cfg.get_double("gamma");
  pc.window_radius = cfg.get_double("window_radius", 0.0);
  pc.trials = cfg.get_int("trials");
  pc.seed = ctx.master_seed;
  cfg.finish();
  pc.validate();

  const std::vector<std::int64_t> counts = poisson::simulate_N_r(pc, ctx.threads);
  std::ostringstream out;
  out << "trial,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) out << i << ',' << counts[i] << '\n';

  std::vector<double> values(counts.begin(), counts.end());
  const double mean = stats::mean(values);
  const double se = values.size() > 1
                        ? stats::sample_sd(values) / std::sqrt(static_cast<double>(values.size()))
                        : 0.0;
  const double window =
      pc.window_radius > 0 ? pc.window_radius : poisson::auto_window_radius(pc.r, pc.gamma);
  json summary;
  summary["mean"] = mean;
  summary["se"] = se;
  summary["analytic_bound"] = poisson::poisson_lower_bound(pc.r, pc.gamma);
  summary["window_radius"] = window;
  summary["window_tail_bound"] = poisson::window_tail_bound(pc.r, pc.gamma, window);
  return {{"counts.csv", out.str()}, {"summary.json", summary.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------
// terrain

Outputs run_terrain_path(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::string grid_path = cfg.get_string("grid");
  const std::vector<double> src = cfg.get_double_array("src");
  const std::vector<double> dst = cfg.get_double_array("dst");
  double delta = cfg.get_double("delta", 0.0);
  const std::int64_t connectivity = cfg.get_int("connectivity", 4);
  cfg.finish();
  if (src.size() != 2 || dst.size() != 2)
    throw ValidationError("src and dst must be [lat, lon] pairs");
  if (connectivity != 4 && connectivity != 8)
    throw ValidationError("connectivity must be 4 or 8");

  const terrain::ElevationGrid grid = terrain::load_ascii_grid_file(grid_path);
  if (delta == 0.0) {
    // cellsize in degrees converted to meters at the grid's mean latitude
    const double mean_lat =
        (grid.yllcorner + grid.yllcorner + grid.nrows * grid.cellsize) / 2.0;
    delta = grid.cellsize * 111320.0 * 0.5 *
            (1.0 + std::cos(mean_lat * std::numbers::pi / 180.0));
  }
  if (!(delta > 0)) throw ValidationError("delta must be positive");

  const terrain::Cell src_cell = terrain::cell_from_latlon(grid, src[0], src[1]);
  const terrain::Cell dst_cell = terrain::cell_from_latlon(grid, dst[0], dst[1]);
  const terrain::TerrainPath path =
      terrain::shortest_path(grid, src_cell, dst_cell, delta, static_cast<int>(connectivity));

  std::ostringstream trace;
  terrain::path_to_csv(path, grid, delta, trace);
  json summary;
  summary["delta_m"] = delta;
  summary["connectivity"] = connectivity;
  summary["src_cell"] = {src_cell.row, src_cell.col};
  summary["dst_cell"] = {dst_cell.row, dst_cell.col};
  summary["total_cost_m"] = path.total_cost;
  summary["cells"] = static_cast<std::int64_t>(path.cells.size());
  return {{"path.geojson", terrain::path_to_geojson(path, grid)},
          {"trace.csv", trace.str()},
          {"summary.json", summary.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------
// ukdata

struct Startpoint {
  double lat = 0;
  double lon = 0;
  ukdata::UkRegion region = ukdata::UkRegion::NorthWest;
  bool region_given = false;
};

std::vector<Startpoint> load_startpoints(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open startpoints file: " + path);
  const csv::Table table = csv::read_table(in);
  const std::size_t lat_col = table.require_column("lat");
  const std::size_t lon_col = table.require_column("lon");
  const bool has_region = table.has_column("region");
  const std::size_t region_col = has_region ? table.column.at("region") : 0;
  std::vector<Startpoint> out;
  for (const auto& row : table.rows) {
    Startpoint sp;
    if (row.size() <= std::max(lat_col, lon_col)) continue;
    if (!csv::parse_double(row[lat_col], sp.lat) || !csv::parse_double(row[lon_col], sp.lon))
      continue;
    if (has_region && region_col < row.size()) {
      const std::string r = csv::trim(row[region_col]);
      if (r == "south-east") {
        sp.region = ukdata::UkRegion::SouthEast;
        sp.region_given = true;
      } else if (r == "north-west") {
        sp.region = ukdata::UkRegion::NorthWest;
        sp.region_given = true;
      }
    }
    if (!sp.region_given) sp.region = ukdata::classify_region(sp.lat, sp.lon);
    out.push_back(sp);
  }
  if (out.empty()) throw ValidationError("no usable startpoints in " + path);
  return out;
}

ukdata::ColumnMap columns_from(ConfigView& cfg) {
  ConfigView cols = cfg.get_object("columns");
  ukdata::ColumnMap map;
  map.lat = cols.get_string("lat", map.lat);
  map.lon = cols.get_string("lon", map.lon);
  map.flow = cols.get_string("flow", map.flow);
  map.road = cols.get_string("road", map.road);
  cols.finish();
  return map;
}

std::vector<ukdata::CountPoint> load_dataset(const std::string& path,
                                             const ukdata::ColumnMap& columns,
                                             ukdata::LoadReport* report) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset: " + path);
  return ukdata::load_count_points(in, columns, report);
}

std::vector<ukdata::RunningMaxCurve> strip_curves(const std::vector<ukdata::CountPoint>& points,
                                                  const std::vector<Startpoint>& startpoints,
                                                  double width_override_km, double length_km,
                                                  std::vector<double>* widths_used = nullptr) {
  std::vector<ukdata::RunningMaxCurve> curves;
  curves.reserve(startpoints.size());
  for (const Startpoint& sp : startpoints) {
    const double width = width_override_km > 0 ? width_override_km
                                               : ukdata::default_strip_width_km(sp.region);
    if (widths_used) widths_used->push_back(width);
    const std::vector<ukdata::StripObservation> obs =
        ukdata::strip_select(points, sp.lat, sp.lon, width, length_km);
    curves.push_back(ukdata::running_max(obs));
  }
  return curves;
}

Outputs run_ukdata_strips(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::string dataset = cfg.get_string("dataset");
  const std::string startpoints_path = cfg.get_string("startpoints");
  const double length_km = cfg.get_double("length_km", 150.0);
  const double width_km = cfg.get_double("width_km", 0.0);  // 0 = per-region default
  const ukdata::ColumnMap columns = columns_from(cfg);
  cfg.finish();
  if (!(length_km > 0)) throw ValidationError("length_km must be positive");
  if (width_km < 0) throw ValidationError("width_km must be >= 0");

  ukdata::LoadReport report;
  const std::vector<ukdata::CountPoint> points = load_dataset(dataset, columns, &report);
  const std::vector<Startpoint> startpoints = load_startpoints(startpoints_path);
  std::vector<double> widths;
  const std::vector<ukdata::RunningMaxCurve> curves =
      strip_curves(points, startpoints, width_km, length_km, &widths);

  Outputs outputs;
  json index = json::array();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "curve_%04zu.csv", i);
    std::ostringstream out;
    out << "distance_km,flow,running_max\n";
    for (std::size_t j = 0; j < curves[i].size(); ++j)
      out << fd(curves[i].distance_km[j]) << ',' << fd(curves[i].flow[j]) << ','
          << fd(curves[i].running_max[j]) << '\n';
    outputs.push_back({name, out.str()});
    index.push_back({{"file", name},
                     {"lat", startpoints[i].lat},
                     {"lon", startpoints[i].lon},
                     {"region", ukdata::region_name(startpoints[i].region)},
                     {"width_km", widths[i]},
                     {"observations", static_cast<std::int64_t>(curves[i].size())}});
  }
  json summary;
  summary["startpoints"] = index;
  summary["dataset_rows_parsed"] = report.parsed;
  summary["dataset_rows_dropped_missing"] = report.dropped_missing;
  summary["dataset_rows_dropped_invalid"] = report.dropped_invalid;
  summary["length_km"] = length_km;
  summary["eastward_only"] = true;  // geometry choice reported with results
  outputs.push_back({"summary.json", summary.dump(2) + "\n"});
  return outputs;
}

Outputs run_ukdata_stats(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::string dataset = cfg.get_string("dataset");
  const std::string startpoints_path = cfg.get_string("startpoints");
  const double length_km = cfg.get_double("length_km", 150.0);
  const double width_km = cfg.get_double("width_km", 0.0);
  const std::vector<double> d_values = cfg.get_double_array("d_values");
  ukdata::ThresholdScan scan;
  scan.k_min = cfg.get_double("k_min", scan.k_min);
  scan.k_max = cfg.get_double("k_max", scan.k_max);
  scan.k_count = static_cast<int>(cfg.get_int("k_count", scan.k_count));
  const std::vector<double> band = cfg.get_double_array("freq_band", {{0.49, 0.51}});
  const ukdata::ColumnMap columns = columns_from(cfg);
  cfg.finish();
  if (band.size() != 2 || !(band[0] < band[1]))
    throw ValidationError("freq_band must be [low, high] with low < high");
  for (double d : d_values)
    if (!(d > 0)) throw ValidationError("d_values must be positive");

  ukdata::LoadReport report;
  const std::vector<ukdata::CountPoint> points = load_dataset(dataset, columns, &report);
  const std::vector<Startpoint> startpoints = load_startpoints(startpoints_path);
  const std::vector<ukdata::RunningMaxCurve> curves =
      strip_curves(points, startpoints, width_km, length_km);

  const ukdata::ThresholdCurve threshold =
      ukdata::median_threshold_curve(curves, d_values, {band[0], band[1]}, scan);

  // aggregate exceedance table over the full scan grid
  std::ostringstream agg;
  agg << "d_km,k,frequency\n";
  const double step = std::log(scan.k_max / scan.k_min) / (scan.k_count - 1);
  const double total = static_cast<double>(curves.size());
  for (double d : d_values) {
    const std::vector<double> maxima = ukdata::maxima_within(curves, d);
    for (int i = 0; i < scan.k_count; ++i) {
      const double k = scan.k_min * std::exp(step * i);
      const auto at = std::lower_bound(maxima.begin(), maxima.end(), k, std::greater_equal<>());
      agg << fd(d) << ',' << fd(k) << ',' << fd(static_cast<double>(at - maxima.begin()) / total)
          << '\n';
    }
  }

  std::ostringstream tc;
  tc << "d_km,k_low,k_mid,k_high\n";
  std::vector<double> plot_d, plot_k;
  for (const ukdata::ThresholdBand& b : threshold.bands) {
    if (b.ks.empty()) continue;
    tc << fd(b.d_km) << ',' << fd(b.ks.front()) << ',' << fd(b.k_mid) << ',' << fd(b.ks.back())
       << '\n';
    plot_d.push_back(b.d_km);
    plot_k.push_back(b.k_mid);
  }

  json fit;
  fit["empty_bands"] = threshold.empty_bands;
  if (threshold.fit) {
    fit["slope"] = threshold.fit->slope;
    fit["intercept"] = threshold.fit->intercept;
    fit["r2"] = threshold.fit->r_squared;
    fit["n_points"] = threshold.fit->n_points;
  }
  fit["dataset_rows_parsed"] = report.parsed;
  fit["startpoints"] = static_cast<std::int64_t>(startpoints.size());

  Outputs outputs = {{"aggregate.csv", agg.str()},
                     {"threshold_curve.csv", tc.str()},
                     {"fit.json", fit.dump(2) + "\n"}};

  if (plot_d.size() >= 2) {
    svg::Series series;
    series.label = "threshold in band";
    series.x = plot_d;
    series.y = plot_k;
    svg::PlotStyle style;
    style.title = "traffic threshold vs distance";
    style.x_label = "d (km)";
    style.y_label = "k";
    style.log_x = true;
    style.log_y = true;
    outputs.push_back({"threshold_curve.svg", svg::plot_svg({{series}}, style).svg});
  }
  std::vector<svg::Series> curve_series;
  for (std::size_t i = 0; i < curves.size() && i < 6; ++i) {
    if (curves[i].empty()) continue;
    svg::Series s;
    s.label = "startpoint " + std::to_string(i);
    s.x = curves[i].distance_km;
    s.y = curves[i].running_max;
    curve_series.push_back(std::move(s));
  }
  if (!curve_series.empty()) {
    svg::PlotStyle style;
    style.title = "running maximum of crossing traffic";
    style.x_label = "distance east (km)";
    style.y_label = "max flow";
    outputs.push_back({"running_max.svg", svg::plot_svg(curve_series, style).svg});
  }
  return outputs;
}

// ---------------------------------------------------------------------------
// figures

Outputs run_simulate_geodesics(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::int64_t height = cfg.get_int("height", 96);
  const std::int64_t halfwidth = cfg.get_int("halfwidth", 96);
  const double stroke_scale = cfg.get_double("stroke_scale", 1.0);
  cfg.finish();
  if (height < 2 || halfwidth < 1) throw ValidationError("height must be >= 2, halfwidth >= 1");

  const Coord pad = 2;
  const Coord ext = (height + 2 * halfwidth) / 2 + pad;
  const Region region({-ext, -ext}, {ext + height, ext + height});
  const WeightField field = WeightField::sample(region, derive_seed(ctx.master_seed, 0, 0));

  // each point of the bottom line sends a geodesic to a uniformly chosen
  // admissible point of the top line
  std::vector<lpp::GeodesicPath> paths;
  const std::vector<Point> sources = line_points(0, -halfwidth, halfwidth);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Point s = sources[i];
    std::mt19937_64 rng(derive_seed(ctx.master_seed, i, 1));
    // admissible targets keep both steps nonnegative: |psi(t)-psi(s)| <= height
    const std::vector<Point> targets =
        line_points(height, psi_of(s) - height, psi_of(s) + height);
    std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
    paths.push_back(lpp::geodesic(field, s, targets[pick(rng)], lpp::TiePolicy::UpFirst));
  }
  svg::GeodesicFigureStyle style;
  style.stroke_scale = stroke_scale;
  json summary;
  summary["paths"] = static_cast<std::int64_t>(paths.size());
  summary["height"] = height;
  summary["halfwidth"] = halfwidth;
  return {{"geodesics.svg", svg::geodesic_figure(paths, style)},
          {"summary.json", summary.dump(2) + "\n"}};
}

Outputs run_plot(CommandContext& ctx) {
  ConfigView cfg(ctx.config);
  const std::string input = cfg.get_string("input");
  const std::string x_col = cfg.get_string("x_col");
  const std::string y_col = cfg.get_string("y_col");
  const std::string lo_col = cfg.get_string("band_low_col", "");
  const std::string hi_col = cfg.get_string("band_high_col", "");
  svg::PlotStyle style;
  style.log_x = cfg.get_bool("log_x", false);
  style.log_y = cfg.get_bool("log_y", false);
  style.title = cfg.get_string("title", "");
  style.x_label = cfg.get_string("x_label", x_col);
  style.y_label = cfg.get_string("y_label", y_col);
  cfg.finish();
  if (lo_col.empty() != hi_col.empty())
    throw ValidationError("band_low_col and band_high_col must be given together");

  std::ifstream in(input);
  if (!in) throw ValidationError("cannot open plot input: " + input);
  const csv::Table table = csv::read_table(in);
  const std::size_t xi = table.require_column(x_col);
  const std::size_t yi = table.require_column(y_col);
  svg::Series series;
  for (const auto& row : table.rows) {
    double x = 0, y = 0;
    if (xi >= row.size() || yi >= row.size()) continue;
    if (!csv::parse_double(row[xi], x) || !csv::parse_double(row[yi], y)) continue;
    series.x.push_back(x);
    series.y.push_back(y);
    if (!lo_col.empty()) {
      double lo = 0, hi = 0;
      const std::size_t li = table.require_column(lo_col);
      const std::size_t hi_i = table.require_column(hi_col);
      if (li < row.size() && hi_i < row.size() && csv::parse_double(row[li], lo) &&
          csv::parse_double(row[hi_i], hi)) {
        series.band_low.push_back(lo);
        series.band_high.push_back(hi);
      } else {
        series.band_low.push_back(y);
        series.band_high.push_back(y);
      }
    }
  }
  const svg::PlotResult plot = svg::plot_svg({{series}}, style);
  json summary;
  summary["dropped_points"] = plot.dropped_points;
  summary["points"] = static_cast<std::int64_t>(series.x.size());
  return {{"plot.svg", plot.svg}, {"summary.json", summary.dump(2) + "\n"}};
}

// ---------------------------------------------------------------------------

using CommandFn = std::function<Outputs(CommandContext&)>;

const std::map<std::string, CommandFn>& command_table() {
  static const std::map<std::string, CommandFn> table = {
      {"traffic-tails", run_traffic_tails},
      {"traffic-meanNn", run_traffic_mean_nn},
      {"traffic-Tn", run_traffic_tn},
      {"fluctuation", run_fluctuation},
      {"coalescence", run_coalescence},
      {"poisson", run_poisson},
      {"terrain-path", run_terrain_path},
      {"ukdata-strips", run_ukdata_strips},
      {"ukdata-stats", run_ukdata_stats},
      {"simulate-geodesics", run_simulate_geodesics},
      {"plot", run_plot},
  };
  return table;
}

void write_atomic(const std::filesystem::path& dir, const std::string& name,
                  const std::string& content) {
  const std::filesystem::path tmp = dir / (name + ".tmp");
  const std::filesystem::path final_path = dir / name;
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out) throw Error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, final_path);
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : command_table()) out.push_back(name);
    return out;
  }();
  return names;
}

RunResult run(const std::string& subcommand, const std::string& config_text,
              const RunOptions& options) {
  RunResult result;
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    json err;
    err["error"] = {{"kind", kind}, {"message", message}, {"subcommand", subcommand}};
    result.exit_code = code;
    result.error_json = err.dump();
    return result;
  };

  const auto it = command_table().find(subcommand);
  if (it == command_table().end())
    return fail(kExitValidation, "validation", "unknown subcommand '" + subcommand + "'");

  CommandContext ctx;
  try {
    ctx.config = json::parse(config_text);
  } catch (const json::exception& e) {
    return fail(kExitValidation, "validation", std::string("config is not valid JSON: ") + e.what());
  }
  if (!ctx.config.is_object())
    return fail(kExitValidation, "validation", "config must be a JSON object");
  if (options.seed_override) ctx.config["master_seed"] = *options.seed_override;

  ctx.threads = options.threads > 0 ? options.threads : default_thread_count();
  if (ctx.config.contains("master_seed")) {
    if (!ctx.config["master_seed"].is_number_unsigned() &&
        !ctx.config["master_seed"].is_number_integer())
      return fail(kExitValidation, "validation", "master_seed must be an integer");
    ctx.master_seed = ctx.config["master_seed"].get<std::uint64_t>();
  }

  Outputs outputs;
  try {
    // mark master_seed as consumed for every command
    json& cfg = ctx.config;
    if (!cfg.contains("master_seed")) cfg["master_seed"] = ctx.master_seed;
    json run_config = cfg;
    run_config.erase("master_seed");
    CommandContext inner = ctx;
    inner.config = run_config;
    outputs = it->second(inner);
    ctx.extra_exit = inner.extra_exit;
  } catch (const ValidationError& e) {
    return fail(kExitValidation, "validation", e.what());
  } catch (const SchemaError& e) {
    return fail(kExitValidation, "validation", e.what());
  } catch (const DomainError& e) {
    return fail(kExitValidation, "validation", e.what());
  } catch (const Error& e) {
    return fail(kExitRuntime, "runtime", e.what());
  } catch (const std::exception& e) {
    return fail(kExitRuntime, "runtime", e.what());
  }

  try {
    std::filesystem::create_directories(options.out_dir);
    json manifest;
    manifest["command"] = subcommand;
    manifest["config"] = ctx.config;
    manifest["version"] = kVersion;
    json files = json::array();
    for (const OutputFile& f : outputs) {
      write_atomic(options.out_dir, f.name, f.content);
      result.files.push_back(f.name);
      files.push_back({{"file", f.name}, {"sha256", sha256_hex(f.content)}});
    }
    manifest["outputs"] = files;
    const std::string manifest_text = manifest.dump(2) + "\n";
    write_atomic(options.out_dir, "manifest.json", manifest_text);
    result.files.push_back("manifest.json");
  } catch (const std::exception& e) {
    return fail(kExitRuntime, "runtime", e.what());
  }

  result.exit_code = ctx.extra_exit;
  return result;
}

}  // namespace roadlpp::runner
