#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "gsopt/model/dataset.hpp"
#include "gsopt/model/types.hpp"

namespace gsopt::model {

using Json = nlohmann::ordered_json;

namespace detail {

template <class T>
Json opt_to_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json bands_to_json(const BandSet& b) {
  Json a = Json::array();
  for (auto band : b) a.push_back(std::string(to_string(band)));
  return a;
}

inline BandSet bands_from_json(const Json& j) {
  BandSet out;
  for (const auto& e : j) {
    const auto b = parse_band(e.get<std::string>());
    if (!b) throw ConfigError("unknown band '" + e.get<std::string>() + "'");
    out.insert(*b);
  }
  return out;
}

template <class T>
void read_opt(const Json& v, std::optional<T>& out) {
  if (v.is_null()) out.reset();
  else out = v.get<T>();
}

inline void reject_unknown(const Json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
}

}  // namespace detail

inline const std::set<std::string>& constraint_keys() {
  static const std::set<std::string> keys{
      "objective",         "d_min",          "d_s_min",
      "t_period",          "t_step",         "e_max",
      "station_exclusion", "satellite_exclusion", "g_max_limit",
      "p_max",             "t_min",          "n_min",
      "required_providers", "required_locations", "m_min",
      "m_max",             "required_bands", "include_non_operational",
      "count_boundary_gaps", "successor_horizon"};
  return keys;
}

inline Json config_to_json(const ConstraintConfig& c) {
  Json j;
  j["objective"] = std::string(to_string(c.objective));
  j["d_min"] = detail::opt_to_json(c.d_min);
  j["d_s_min"] = detail::opt_to_json(c.d_s_min);
  j["t_period"] = c.t_period;
  j["t_step"] = c.t_step;
  j["e_max"] = detail::opt_to_json(c.e_max);
  j["station_exclusion"] = c.station_exclusion;
  j["satellite_exclusion"] = c.satellite_exclusion;
  j["g_max_limit"] = detail::opt_to_json(c.g_max_limit);
  j["p_max"] = detail::opt_to_json(c.p_max);
  j["t_min"] = detail::opt_to_json(c.t_min);
  j["n_min"] = detail::opt_to_json(c.n_min);
  j["required_providers"] = c.required_providers;
  j["required_locations"] = c.required_locations;
  j["m_min"] = detail::opt_to_json(c.m_min);
  j["m_max"] = detail::opt_to_json(c.m_max);
  j["required_bands"] = detail::bands_to_json(c.required_bands);
  j["include_non_operational"] = c.include_non_operational;
  j["count_boundary_gaps"] = c.count_boundary_gaps;
  j["successor_horizon"] = c.successor_horizon;
  return j;
}

/// Applies the constraint keys present in `j` on top of `c`; `null` disables an optional family.
/// Keys outside `constraint_keys()` are ignored here; callers reject unknown keys.
inline void apply_config_json(const Json& j, ConstraintConfig& c) {
  try {
    if (j.contains("objective")) c.objective = parse_objective(j["objective"].get<std::string>());
    if (j.contains("d_min")) detail::read_opt(j["d_min"], c.d_min);
    if (j.contains("d_s_min")) detail::read_opt(j["d_s_min"], c.d_s_min);
    if (j.contains("t_period")) c.t_period = j["t_period"].get<double>();
    if (j.contains("t_step")) c.t_step = j["t_step"].get<double>();
    if (j.contains("e_max")) detail::read_opt(j["e_max"], c.e_max);
    if (j.contains("station_exclusion")) c.station_exclusion = j["station_exclusion"].get<bool>();
    if (j.contains("satellite_exclusion"))
      c.satellite_exclusion = j["satellite_exclusion"].get<bool>();
    if (j.contains("g_max_limit")) detail::read_opt(j["g_max_limit"], c.g_max_limit);
    if (j.contains("p_max")) detail::read_opt(j["p_max"], c.p_max);
    if (j.contains("t_min")) detail::read_opt(j["t_min"], c.t_min);
    if (j.contains("n_min")) detail::read_opt(j["n_min"], c.n_min);
    if (j.contains("required_providers"))
      c.required_providers = j["required_providers"].get<std::vector<std::string>>();
    if (j.contains("required_locations"))
      c.required_locations = j["required_locations"].get<std::vector<std::string>>();
    if (j.contains("m_min")) detail::read_opt(j["m_min"], c.m_min);
    if (j.contains("m_max")) detail::read_opt(j["m_max"], c.m_max);
    if (j.contains("required_bands")) c.required_bands = detail::bands_from_json(j["required_bands"]);
    if (j.contains("include_non_operational"))
      c.include_non_operational = j["include_non_operational"].get<bool>();
    if (j.contains("count_boundary_gaps"))
      c.count_boundary_gaps = j["count_boundary_gaps"].get<bool>();
    if (j.contains("successor_horizon")) c.successor_horizon = j["successor_horizon"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid constraint configuration: ") + e.what());
  }
}

inline Json scenario_to_json(const Scenario& s) {
  Json j;
  j["seed"] = s.rng_seed;
  j["t_sim_start"] = s.t_sim_start.to_iso8601();
  j["t_sim_end"] = s.t_sim_end.to_iso8601();
  j["t_opt_start"] = s.t_opt_start.to_iso8601();
  j["t_opt_end"] = s.t_opt_end.to_iso8601();
  j["min_elevation_deg"] = s.min_elevation_deg;
  j["coarse_step_s"] = s.coarse_step_s;
  j["propagator"] = std::string(astro::to_string(s.propagator));
  j["constraints"] = config_to_json(s.config);
  Json providers = Json::array();
  for (const auto& p : s.providers)
    providers.push_back({{"id", p.id}, {"name", p.name}, {"integration_cost", p.integration_cost}});
  j["providers"] = providers;
  Json stations = Json::array();
  for (const auto& st : s.stations) {
    stations.push_back({{"id", st.id},
                        {"provider_id", st.provider_id},
                        {"name", st.name},
                        {"country", st.country},
                        {"latitude_deg", st.geodetic.latitude_deg},
                        {"longitude_deg", st.geodetic.longitude_deg},
                        {"altitude_m", st.geodetic.altitude_m},
                        {"bands", detail::bands_to_json(st.bands)},
                        {"status", std::string(to_string(st.status))},
                        {"data_rate", st.data_rate},
                        {"setup_cost", st.setup_cost},
                        {"monthly_cost", st.monthly_cost},
                        {"license_cost", st.license_cost},
                        {"per_pass_cost", st.per_pass_cost},
                        {"per_minute_cost", st.per_minute_cost}});
  }
  j["stations"] = stations;
  Json sats = Json::array();
  for (const auto& sat : s.satellites) {
    std::string l1 = sat.tle.line1, l2 = sat.tle.line2;
    if (l1.empty() || l2.empty()) std::tie(l1, l2) = astro::format_tle_lines(sat.tle);
    sats.push_back({{"id", sat.id},
                    {"name", sat.name},
                    {"tle_line1", l1},
                    {"tle_line2", l2},
                    {"data_rate", sat.data_rate},
                    {"supported_bands", detail::bands_to_json(sat.supported_bands)}});
  }
  j["satellites"] = sats;
  return j;
}

inline Scenario scenario_from_json(const Json& j) {
  static const std::set<std::string> top{"seed",        "t_sim_start",       "t_sim_end",
                                         "t_opt_start", "t_opt_end",         "min_elevation_deg",
                                         "coarse_step_s", "propagator",      "constraints",
                                         "providers",   "stations",          "satellites"};
  detail::reject_unknown(j, top, "scenario");
  Scenario s;
  try {
    s.rng_seed = j.at("seed").get<std::uint64_t>();
    s.t_sim_start = EpochUtc::parse_iso8601(j.at("t_sim_start").get<std::string>());
    s.t_sim_end = EpochUtc::parse_iso8601(j.at("t_sim_end").get<std::string>());
    s.t_opt_start = EpochUtc::parse_iso8601(j.at("t_opt_start").get<std::string>());
    s.t_opt_end = EpochUtc::parse_iso8601(j.at("t_opt_end").get<std::string>());
    s.min_elevation_deg = j.value("min_elevation_deg", 10.0);
    s.coarse_step_s = j.value("coarse_step_s", 30.0);
    s.propagator = astro::parse_propagator_kind(j.value("propagator", std::string("sgp4")));
    const Json& c = j.at("constraints");
    detail::reject_unknown(c, constraint_keys(), "constraints");
    apply_config_json(c, s.config);
    for (const auto& p : j.at("providers"))
      s.providers.push_back({p.at("id").get<int>(), p.at("name").get<std::string>(),
                             p.at("integration_cost").get<double>()});
    for (const auto& e : j.at("stations")) {
      StationLocation st;
      st.id = e.at("id").get<int>();
      st.provider_id = e.at("provider_id").get<int>();
      st.name = e.at("name").get<std::string>();
      st.country = e.at("country").get<std::string>();
      st.geodetic = {e.at("latitude_deg").get<double>(), e.at("longitude_deg").get<double>(),
                     e.at("altitude_m").get<double>()};
      st.bands = detail::bands_from_json(e.at("bands"));
      const auto status = parse_status(e.at("status").get<std::string>());
      if (!status) throw ConfigError("unknown station status in scenario");
      st.status = *status;
      st.data_rate = e.at("data_rate").get<double>();
      st.setup_cost = e.at("setup_cost").get<double>();
      st.monthly_cost = e.at("monthly_cost").get<double>();
      st.license_cost = e.at("license_cost").get<double>();
      st.per_pass_cost = e.at("per_pass_cost").get<double>();
      st.per_minute_cost = e.at("per_minute_cost").get<double>();
      s.stations.push_back(std::move(st));
    }
    for (const auto& e : j.at("satellites")) {
      Satellite sat;
      sat.id = e.at("id").get<int>();
      sat.name = e.at("name").get<std::string>();
      const auto text = e.at("tle_line1").get<std::string>() + "\n" +
                        e.at("tle_line2").get<std::string>() + "\n";
      auto parsed = astro::parse_tle_catalog(text);
      if (parsed.records.size() != 1)
        throw ConfigError("invalid TLE for satellite '" + sat.name + "'");
      sat.tle = parsed.records.front();
      sat.tle.name = sat.name;
      sat.data_rate = e.at("data_rate").get<double>();
      sat.supported_bands = detail::bands_from_json(e.value("supported_bands", Json::array()));
      s.satellites.push_back(std::move(sat));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid scenario document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << scenario_to_json(s).dump(2) << "\n";
}

inline Scenario load_scenario(const std::string& path) {
  try {
    return scenario_from_json(Json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("scenario " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace gsopt::model
