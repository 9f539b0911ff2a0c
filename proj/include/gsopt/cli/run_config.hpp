#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsopt/analysis/window_study.hpp"
#include "gsopt/model/dataset.hpp"
#include "gsopt/model/random.hpp"
#include "gsopt/model/scenario_io.hpp"
#include "gsopt/solver/branch_and_bound.hpp"

namespace gsopt::cli {

using model::ConfigError;
using model::Json;

/// Everything a subcommand needs; defaults are the design-table values.
struct RunConfig {
  std::string scenario;  // pre-generated scenario JSON; replaces generation when set
  std::string stations;
  std::string tles;
  std::uint64_t seed = 1;
  int satellites = 1;
  std::string start = "2024-09-11T00:00:00Z";
  double sim_days = 7.0;
  double opt_days = 365.0;
  double min_elevation_deg = 10.0;
  double coarse_step_s = 30.0;
  std::string propagator = "sgp4";
  bool randomize_costs = true;
  model::ConstraintConfig constraints = model::ConstraintConfig::defaults_for(model::Objective::MinCost);
  solver::Limits limits;
  int providers = 1;  // baseline subset size
  int trials = 10;
  std::vector<int> constellation_sizes = {1, 2};  // empty: just `satellites`
  double subset_time_limit_s = 60.0;
  std::vector<int> window_days = analysis::default_window_days();
  int window_sample = 20;
  double cone_altitude_m = 525e3;
};

inline std::string default_stations_path() {
#ifdef GSOPT_DATA_DIR
  return model::bundled_data_path("stations.csv");
#else
  return "data/stations.csv";
#endif
}

inline std::string default_tles_path() {
#ifdef GSOPT_DATA_DIR
  return model::bundled_data_path("sample_catalog.tle");
#else
  return "data/sample_catalog.tle";
#endif
}

inline RunConfig default_run_config() {
  RunConfig c;
  c.stations = default_stations_path();
  c.tles = default_tles_path();
  return c;
}

namespace detail {

template <class T>
T get(const Json& j, const char* key, const char* where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid value for '") + key + "' in " + where + ": " + e.what());
  }
}

}  // namespace detail

/// Overlays a run-configuration document. The objective, when given, selects the design-table
/// constraint defaults before the remaining constraint keys are applied.
inline void apply_run_json(const Json& j, RunConfig& c) {
  using model::detail::reject_unknown;
  static const std::set<std::string> top{
      "scenario", "stations", "tles", "seed", "satellites", "start", "sim_days", "opt_days",
      "min_elevation_deg", "coarse_step_s", "propagator", "randomize_costs", "constraints",
      "solver", "baseline", "window_study", "map"};
  reject_unknown(j, top, "config");
  const char* w = "config";
  if (j.contains("scenario")) c.scenario = detail::get<std::string>(j, "scenario", w);
  if (j.contains("stations")) c.stations = detail::get<std::string>(j, "stations", w);
  if (j.contains("tles")) c.tles = detail::get<std::string>(j, "tles", w);
  if (j.contains("seed")) c.seed = detail::get<std::uint64_t>(j, "seed", w);
  if (j.contains("satellites")) c.satellites = detail::get<int>(j, "satellites", w);
  if (j.contains("start")) c.start = detail::get<std::string>(j, "start", w);
  if (j.contains("sim_days")) c.sim_days = detail::get<double>(j, "sim_days", w);
  if (j.contains("opt_days")) c.opt_days = detail::get<double>(j, "opt_days", w);
  if (j.contains("min_elevation_deg")) c.min_elevation_deg = detail::get<double>(j, "min_elevation_deg", w);
  if (j.contains("coarse_step_s")) c.coarse_step_s = detail::get<double>(j, "coarse_step_s", w);
  if (j.contains("propagator")) c.propagator = detail::get<std::string>(j, "propagator", w);
  if (j.contains("randomize_costs")) c.randomize_costs = detail::get<bool>(j, "randomize_costs", w);
  if (j.contains("constraints")) {
    const Json& k = j["constraints"];
    reject_unknown(k, model::constraint_keys(), "constraints");
    if (k.contains("objective")) {
      const auto keep_horizon = c.constraints.successor_horizon;
      c.constraints = model::ConstraintConfig::defaults_for(
          model::parse_objective(detail::get<std::string>(k, "objective", "constraints")));
      c.constraints.successor_horizon = keep_horizon;
    }
    model::apply_config_json(k, c.constraints);
  }
  if (j.contains("solver")) {
    const Json& k = j["solver"];
    reject_unknown(k, {"time_limit_s", "node_limit", "rel_gap"}, "solver");
    if (k.contains("time_limit_s")) c.limits.time_s = detail::get<double>(k, "time_limit_s", "solver");
    if (k.contains("node_limit")) c.limits.nodes = detail::get<long>(k, "node_limit", "solver");
    if (k.contains("rel_gap")) c.limits.rel_gap = detail::get<double>(k, "rel_gap", "solver");
  }
  if (j.contains("baseline")) {
    const Json& k = j["baseline"];
    reject_unknown(k, {"providers", "trials", "constellation_sizes", "subset_time_limit_s"}, "baseline");
    if (k.contains("providers")) c.providers = detail::get<int>(k, "providers", "baseline");
    if (k.contains("trials")) c.trials = detail::get<int>(k, "trials", "baseline");
    if (k.contains("constellation_sizes"))
      c.constellation_sizes = detail::get<std::vector<int>>(k, "constellation_sizes", "baseline");
    if (k.contains("subset_time_limit_s"))
      c.subset_time_limit_s = detail::get<double>(k, "subset_time_limit_s", "baseline");
  }
  if (j.contains("window_study")) {
    const Json& k = j["window_study"];
    reject_unknown(k, {"durations_days", "sample"}, "window_study");
    if (k.contains("durations_days"))
      c.window_days = detail::get<std::vector<int>>(k, "durations_days", "window_study");
    if (k.contains("sample")) c.window_sample = detail::get<int>(k, "sample", "window_study");
  }
  if (j.contains("map")) {
    const Json& k = j["map"];
    reject_unknown(k, {"cone_altitude_m"}, "map");
    if (k.contains("cone_altitude_m")) c.cone_altitude_m = detail::get<double>(k, "cone_altitude_m", "map");
  }
}

inline Json read_config_document(const std::string& path) {
  try {
    return Json::parse(model::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

inline RunConfig load_run_config(const std::string& path, RunConfig base = default_run_config()) {
  apply_run_json(read_config_document(path), base);
  return base;
}

inline void check_run_config(const RunConfig& c) {
  if (c.satellites < 1) throw ConfigError("satellites must be at least 1");
  if (!(c.sim_days > 0.0)) throw ConfigError("sim_days must be positive");
  if (c.opt_days < c.sim_days) throw ConfigError("opt_days must not be shorter than sim_days");
  if (c.providers != 1 && c.providers != 2) throw ConfigError("providers must be 1 or 2");
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  for (int n : c.constellation_sizes)
    if (n < 1) throw ConfigError("constellation sizes must be at least 1");
  if (!(c.limits.time_s >= 0.0)) throw ConfigError("time limit must be non-negative");
  if (!(c.subset_time_limit_s >= 0.0)) throw ConfigError("subset time limit must be non-negative");
  if (c.window_sample < 1) throw ConfigError("window_study sample must be at least 1");
  if (c.window_days.empty()) throw ConfigError("window_study durations_days must not be empty");
  if (!(c.cone_altitude_m > 0.0)) throw ConfigError("cone altitude must be positive");
  try {
    (void)astro::EpochUtc::parse_iso8601(c.start);
    (void)astro::parse_propagator_kind(c.propagator);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

/// Echo of the effective configuration, embedded in every output document.
inline Json run_config_to_json(const RunConfig& c) {
  Json j;
  if (!c.scenario.empty()) j["scenario"] = c.scenario;
  j["stations"] = c.stations;
  j["tles"] = c.tles;
  j["seed"] = c.seed;
  j["satellites"] = c.satellites;
  j["start"] = c.start;
  j["sim_days"] = c.sim_days;
  j["opt_days"] = c.opt_days;
  j["min_elevation_deg"] = c.min_elevation_deg;
  j["coarse_step_s"] = c.coarse_step_s;
  j["propagator"] = c.propagator;
  j["randomize_costs"] = c.randomize_costs;
  j["constraints"] = model::config_to_json(c.constraints);
  j["solver"] = {{"time_limit_s", c.limits.time_s}, {"node_limit", c.limits.nodes}, {"rel_gap", c.limits.rel_gap}};
  j["baseline"] = {{"providers", c.providers},
                   {"trials", c.trials},
                   {"constellation_sizes", c.constellation_sizes},
                   {"subset_time_limit_s", c.subset_time_limit_s}};
  j["window_study"] = {{"durations_days", c.window_days}, {"sample", c.window_sample}};
  j["map"] = {{"cone_altitude_m", c.cone_altitude_m}};
  return j;
}

/// Scenario from a saved document, or generated: stations pre-filtered by band and status,
/// satellites sampled from the catalog, costs randomized from the seed.
inline model::Scenario build_scenario(const RunConfig& c, int satellites, std::uint64_t seed) {
  check_run_config(c);
  model::Scenario s;
  if (!c.scenario.empty()) {
    s = model::load_scenario(c.scenario);
    s.config = c.constraints;
    s.min_elevation_deg = c.min_elevation_deg;
    model::validate(s);
    return s;
  }
  const auto ds = model::load_station_dataset(c.stations);
  const auto catalog = astro::parse_tle_catalog(model::read_text_file(c.tles));
  s.stations = model::filter_stations_by_bands(ds.stations, c.constraints.required_bands,
                                               c.constraints.include_non_operational);
  s.providers = ds.providers;
  std::vector<astro::TleRecord> picked;
  for (auto i : model::sample_catalog(catalog.records, static_cast<std::size_t>(satellites), seed))
    picked.push_back(catalog.records[i]);
  s.satellites = model::satellites_from_catalog(picked);
  const auto t0 = astro::EpochUtc::parse_iso8601(c.start);
  s.t_sim_start = t0;
  s.t_sim_end = t0 + c.sim_days * 86400.0;
  s.t_opt_start = t0;
  s.t_opt_end = t0 + c.opt_days * 86400.0;
  s.min_elevation_deg = c.min_elevation_deg;
  s.coarse_step_s = c.coarse_step_s;
  s.propagator = astro::parse_propagator_kind(c.propagator);
  s.config = c.constraints;
  s.rng_seed = seed;
  if (c.randomize_costs) s = model::randomize_scenario(s, seed);
  model::validate(s);
  return s;
}

inline model::Scenario build_scenario(const RunConfig& c) { return build_scenario(c, c.satellites, c.seed); }

}  // namespace gsopt::cli
