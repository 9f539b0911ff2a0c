// gsopt command-line entry point.

#include <CLI11.hpp>

#include "gsopt/cli/commands.hpp"

namespace {

using gsopt::cli::RunConfig;

struct Flags {
  std::string config, out = ".", objective, stations, tles;
  std::optional<std::uint64_t> seed;
  std::optional<int> providers, trials, satellites;
  std::optional<double> time_limit, min_elevation;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "Run configuration (JSON)");
  sub->add_option("--seed", f.seed, "Random seed");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_option("--objective", f.objective, "min_cost, max_data or min_max_gap");
  sub->add_option("--providers", f.providers, "Providers per baseline subset (1 or 2)");
  sub->add_option("--time-limit", f.time_limit, "Solver time limit in seconds");
  sub->add_option("--stations", f.stations, "Station dataset (CSV)");
  sub->add_option("--tles", f.tles, "TLE catalog");
  sub->add_option("--min-elevation", f.min_elevation, "Elevation mask in degrees");
  sub->add_option("--satellites", f.satellites, "Satellites sampled from the catalog (also the baseline constellation size)");
  sub->add_option("--trials", f.trials, "Randomized trials per constellation size");
}

// Config file first, then flags on top.
RunConfig resolve(const Flags& f) {
  RunConfig c = gsopt::cli::default_run_config();
  auto doc = f.config.empty() ? gsopt::model::Json::object() : gsopt::cli::read_config_document(f.config);
  if (!f.objective.empty() && doc.is_object()) {
    if (!doc.contains("constraints")) doc["constraints"] = gsopt::model::Json::object();
    if (doc["constraints"].is_object()) doc["constraints"]["objective"] = f.objective;
  }
  gsopt::cli::apply_run_json(doc, c);
  if (f.seed) c.seed = *f.seed;
  if (f.providers) c.providers = *f.providers;
  if (f.time_limit) c.limits.time_s = *f.time_limit;
  if (!f.stations.empty()) c.stations = f.stations;
  if (!f.tles.empty()) c.tles = f.tles;
  if (f.min_elevation) c.min_elevation_deg = *f.min_elevation;
  if (f.satellites) {
    c.satellites = *f.satellites;
    c.constellation_sizes = {*f.satellites};
  }
  if (f.trials) c.trials = *f.trials;
  gsopt::cli::check_run_config(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground-station network selection over commercial providers"};
  app.require_subcommand(1);
  Flags f;
  std::function<void(const RunConfig&)> action;
  auto add = [&](const char* name, const char* help, std::function<void(const RunConfig&)> fn) {
    auto* sub = app.add_subcommand(name, help);
    add_common(sub, f);
    sub->callback([&action, fn] { action = fn; });
  };
  add("contacts", "Compute contact windows", [&](const RunConfig& c) { gsopt::cli::cmd_contacts(c, f.out); });
  add("optimize", "Select providers and locations", [&](const RunConfig& c) { gsopt::cli::cmd_optimize(c, f.out); });
  add("baseline", "Solve one- or two-provider baselines",
      [&](const RunConfig& c) { gsopt::cli::cmd_baseline(c, f.out); });
  add("window-study", "Simulation-window stability statistics",
      [&](const RunConfig& c) { gsopt::cli::cmd_window_study(c, f.out); });
  add("export-lp", "Write the integer program in LP format",
      [&](const RunConfig& c) { gsopt::cli::cmd_export_lp(c, f.out); });
  add("scenario-gen", "Write a reproducible scenario document",
      [&](const RunConfig& c) { gsopt::cli::cmd_scenario_gen(c, f.out); });
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gsopt::cli::kExitConfig;
  }
  return gsopt::cli::guarded([&] { action(resolve(f)); });
}
