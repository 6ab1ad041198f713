#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "roadlpp/runner.hpp"
#include "roadlpp/version.hpp"

namespace {

std::string default_out_dir() {
  const char* env = std::getenv("ROADLPP_OUT");
  return env && *env ? env : "out";
}

bool parse_latlon(const std::string& text, double& lat, double& lon) {
  std::istringstream in(text);
  char comma = 0;
  return (in >> lat >> comma >> lon) && comma == ',';
}

int fail_validation(const std::string& message) {
  nlohmann::json err;
  err["error"] = {{"kind", "validation"}, {"message", message}};
  std::cerr << err.dump() << "\n";
  return roadlpp::runner::kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice LPP road-traffic simulation lab"};
  app.set_version_flag("--version", roadlpp::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = default_out_dir();
  int threads = 0;
  std::optional<std::uint64_t> seed;

  // terrain-path override flags
  std::string grid_path, src_text, dst_text;
  double delta = 0;
  int connectivity = 0;

  for (const std::string& name : roadlpp::runner::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    CLI::Option* config = sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory (default $ROADLPP_OUT or ./out)");
    sub->add_option("--threads", threads, "worker threads (default: hardware concurrency)");
    sub->add_option("--seed", seed, "override master_seed from the config");
    if (name == "terrain-path") {
      sub->add_option("--grid", grid_path, "elevation raster (ESRI ASCII grid)");
      sub->add_option("--src", src_text, "start as lat,lon");
      sub->add_option("--dst", dst_text, "destination as lat,lon");
      sub->add_option("--delta", delta, "grid spacing in meters (0 = from cellsize)");
      sub->add_option("--connectivity", connectivity, "4 or 8");
    } else {
      config->required();
    }
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  nlohmann::json config = nlohmann::json::object();
  if (!config_path.empty()) {
    std::ifstream config_file(config_path);
    if (!config_file) return fail_validation("cannot open config file: " + config_path);
    try {
      config = nlohmann::json::parse(config_file);
    } catch (const nlohmann::json::exception& e) {
      return fail_validation(std::string("config is not valid JSON: ") + e.what());
    }
  } else if (subcommand != "terrain-path") {
    return fail_validation("--config is required");
  }

  // flags override config keys for terrain-path
  if (subcommand == "terrain-path") {
    if (!grid_path.empty()) config["grid"] = grid_path;
    double lat = 0, lon = 0;
    if (!src_text.empty()) {
      if (!parse_latlon(src_text, lat, lon)) return fail_validation("--src must be lat,lon");
      config["src"] = {lat, lon};
    }
    if (!dst_text.empty()) {
      if (!parse_latlon(dst_text, lat, lon)) return fail_validation("--dst must be lat,lon");
      config["dst"] = {lat, lon};
    }
    if (delta != 0) config["delta"] = delta;
    if (connectivity != 0) config["connectivity"] = connectivity;
  }

  roadlpp::runner::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  options.seed_override = seed;

  const roadlpp::runner::RunResult result =
      roadlpp::runner::run(subcommand, config.dump(), options);
  if (!result.error_json.empty()) {
    std::cerr << result.error_json << "\n";
  } else {
    for (const std::string& f : result.files) std::cout << out_dir << '/' << f << "\n";
  }
  return result.exit_code;
}
