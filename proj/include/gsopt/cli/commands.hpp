#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "gsopt/analysis/baselines.hpp"
#include "gsopt/analysis/window_study.hpp"
#include "gsopt/cli/run_config.hpp"
#include "gsopt/contacts/geometry.hpp"
#include "gsopt/solver/audit.hpp"
#include "gsopt/solver/lp_export.hpp"

namespace gsopt::cli {

enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitCompute = 3 };

/// Runs a subcommand body and maps failures onto the exit-code contract.
inline int guarded(const std::function<void()>& body, std::ostream& err = std::cerr) {
  try {
    body();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCompute;
  }
}

namespace detail {

inline std::filesystem::path prepare_out(const std::string& dir) {
  std::filesystem::path p(dir.empty() ? "." : dir);
  std::filesystem::create_directories(p);
  return p;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

inline Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::vector<contacts::ContactWindow> find_all_contacts(const model::Scenario& s) {
  auto set = contacts::find_contacts(s);
  for (const auto& d : set.diagnostics)
    std::cerr << "warning: satellite " << d.satellite_id << ": " << d.message << "\n";
  return std::move(set.contacts);
}

inline Json certificate_json(const solver::Certificate& c) {
  return {{"status", solver::to_string(c.status)},
          {"objective", opt_json(c.objective)},
          {"best_bound", opt_json(c.best_bound)},
          {"relative_gap", c.rel_gap},
          {"nodes", c.nodes},
          {"lp_iterations", c.lp_iterations},
          {"cuts", c.cuts},
          {"successor_horizon_truncated", c.horizon_truncated},
          {"message", c.message}};
}

inline Json metrics_json(const model::Scenario& s, const solver::MissionMetrics& m) {
  Json per = Json::object();
  for (const auto& sat : s.satellites)
    per[sat.name] = {{"max_gap_s", m.max_gap_per_satellite.at(sat.id)},
                     {"boundary_gap_s", m.boundary_gap_per_satellite.at(sat.id)}};
  return {{"total_mission_cost", m.total_mission_cost},
          {"total_data_downlink_bits", m.total_data_downlink},
          {"max_gap_s", m.max_gap},
          {"monthly_operational_cost", m.monthly_operational_cost},
          {"contacts_per_day", m.contacts_per_day},
          {"per_satellite", per}};
}

inline std::string subset_name(const model::Scenario& s, const std::vector<int>& ids) {
  std::string out;
  for (int id : ids) out += (out.empty() ? "" : "+") + s.provider(id).name;
  return out;
}

}  // namespace detail

struct OptimizeResult {
  model::Scenario scenario;
  std::vector<contacts::ContactWindow> contacts;
  solver::Solution solution;
  Json document;
};

/// Solution document: selections, certificate, metrics and the configuration echo. Wall time is
/// left out so repeated runs compare byte for byte.
inline Json solution_document(const RunConfig& c, const model::Scenario& s,
                              const std::vector<contacts::ContactWindow>& cs, const formulation::IpModel& m,
                              const solver::Solution& sol) {
  Json j;
  j["seed"] = s.rng_seed;
  j["objective"] = std::string(model::to_string(s.config.objective));
  j["objective_value"] = detail::opt_json(sol.certificate.objective);
  j["certificate"] = detail::certificate_json(sol.certificate);
  Json provs = Json::array(), locs = Json::array();
  for (int id : sol.selected_providers) provs.push_back({{"id", id}, {"name", s.provider(id).name}});
  for (int id : sol.selected_locations) {
    const auto& st = s.station(id);
    locs.push_back({{"id", id},
                    {"provider", s.provider(st.provider_id).name},
                    {"name", st.name},
                    {"latitude_deg", st.geodetic.latitude_deg},
                    {"longitude_deg", st.geodetic.longitude_deg}});
  }
  j["selected_providers"] = provs;
  j["selected_locations"] = locs;
  j["selected_contacts"] = sol.selected_contacts;
  j["metrics"] = sol.metrics ? detail::metrics_json(s, *sol.metrics) : Json(nullptr);
  j["model"] = {{"variables", m.variables.size()},
                {"binaries", m.binary_count()},
                {"constraints", m.constraints.size()},
                {"contacts", cs.size()}};
  Json sats = Json::array();
  for (const auto& sat : s.satellites) sats.push_back(sat.name);
  j["scenario"] = {{"t_sim_start", s.t_sim_start.to_iso8601()},
                   {"t_sim_end", s.t_sim_end.to_iso8601()},
                   {"t_opt_start", s.t_opt_start.to_iso8601()},
                   {"t_opt_end", s.t_opt_end.to_iso8601()},
                   {"satellites", sats},
                   {"stations", s.stations.size()}};
  j["config"] = run_config_to_json(c);
  return j;
}

/// FeatureCollection with a point and a coverage-cone polygon per selected location.
inline Json coverage_geojson(const model::Scenario& s, const std::vector<int>& locations, double altitude_m) {
  const double radius = contacts::coverage_cone_radius(altitude_m, s.min_elevation_deg);
  Json features = Json::array();
  for (int id : locations) {
    const auto& st = s.station(id);
    const Json props = {{"provider", s.provider(st.provider_id).name}, {"name", st.name}};
    Json point = {{"type", "Feature"},
                  {"properties", props},
                  {"geometry",
                   {{"type", "Point"}, {"coordinates", {st.geodetic.longitude_deg, st.geodetic.latitude_deg}}}}};
    Json ring = Json::array();
    for (const auto& [lon, lat] : contacts::small_circle(st.geodetic.latitude_deg, st.geodetic.longitude_deg, radius, 64))
      ring.push_back({lon, lat});
    Json cone_props = props;
    cone_props["kind"] = "coverage_cone";
    cone_props["altitude_m"] = altitude_m;
    cone_props["min_elevation_deg"] = s.min_elevation_deg;
    cone_props["radius_deg"] = radius * astro::kRadToDeg;
    Json cone = {{"type", "Feature"},
                 {"properties", cone_props},
                 {"geometry", {{"type", "Polygon"}, {"coordinates", Json::array({ring})}}}};
    features.push_back(std::move(point));
    features.push_back(std::move(cone));
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

inline constexpr const char* kMetricsCsvHeader =
    "objective,status,objective_value,best_bound,relative_gap,total_mission_cost,total_data_downlink_bits,"
    "max_gap_s,monthly_operational_cost,contacts_per_day,providers,locations,contacts";

inline std::string metrics_csv(const model::Scenario& s, const solver::Solution& sol) {
  std::string out = std::string(kMetricsCsvHeader) + "\n";
  out += std::string(model::to_string(s.config.objective)) + "," + solver::to_string(sol.certificate.status) + "," +
         detail::opt_num(sol.certificate.objective) + "," + detail::opt_num(sol.certificate.best_bound) + "," +
         detail::num(sol.certificate.rel_gap) + ",";
  if (sol.metrics) {
    const auto& m = *sol.metrics;
    out += detail::num(m.total_mission_cost) + "," + detail::num(m.total_data_downlink) + "," +
           detail::num(m.max_gap) + "," + detail::num(m.monthly_operational_cost) + "," +
           detail::num(m.contacts_per_day) + ",";
  } else {
    out += ",,,,,";
  }
  out += std::to_string(sol.selected_providers.size()) + "," + std::to_string(sol.selected_locations.size()) + "," +
         std::to_string(sol.selected_contacts.size()) + "\n";
  return out;
}

inline std::string contacts_summary(const RunConfig& c, const model::Scenario& s,
                                    const std::vector<contacts::ContactWindow>& cs) {
  Json per = Json::object();
  std::map<int, int> count;
  for (const auto& w : cs) ++count[w.satellite_id];
  for (const auto& sat : s.satellites) per[sat.name] = count[sat.id];
  Json j = {{"seed", s.rng_seed},
            {"contacts", cs.size()},
            {"stations", s.stations.size()},
            {"per_satellite", per},
            {"t_sim_start", s.t_sim_start.to_iso8601()},
            {"t_sim_end", s.t_sim_end.to_iso8601()},
            {"min_elevation_deg", s.min_elevation_deg},
            {"config", run_config_to_json(c)}};
  return j.dump(2) + "\n";
}

inline std::vector<contacts::ContactWindow> cmd_contacts(const RunConfig& c, const std::string& out) {
  const auto s = build_scenario(c);
  const auto cs = detail::find_all_contacts(s);
  const auto dir = detail::prepare_out(out);
  detail::write_file(dir / "contacts.csv", contacts::contacts_to_csv(cs, s));
  detail::write_file(dir / "contacts_summary.json", contacts_summary(c, s, cs));
  std::cout << cs.size() << " contacts written to " << (dir / "contacts.csv").string() << "\n";
  return cs;
}

inline OptimizeResult cmd_optimize(const RunConfig& c, const std::string& out) {
  OptimizeResult r;
  r.scenario = build_scenario(c);
  r.contacts = detail::find_all_contacts(r.scenario);
  const auto m = formulation::build_model(r.scenario, r.contacts);
  r.solution = solver::solve(m, c.limits);
  if (r.solution.has_incumbent()) {
    if (const auto v = solver::audit(m, r.solution.assignment); !v.empty())
      throw std::runtime_error("solution failed the feasibility audit at row '" + v.front().tag + "'");
    r.solution.metrics = analysis::compute_metrics(r.scenario, r.contacts, r.solution);
  }
  r.document = solution_document(c, r.scenario, r.contacts, m, r.solution);
  const auto dir = detail::prepare_out(out);
  detail::write_file(dir / "solution.json", r.document.dump(2) + "\n");
  detail::write_file(dir / "map.geojson",
                     coverage_geojson(r.scenario, r.solution.selected_locations, c.cone_altitude_m).dump(2) + "\n");
  detail::write_file(dir / "metrics.csv", metrics_csv(r.scenario, r.solution));
  const auto& cert = r.solution.certificate;
  std::cout << solver::to_string(cert.status);
  if (cert.objective) std::cout << " objective " << detail::num(*cert.objective);
  std::cout << " (" << r.solution.selected_locations.size() << " locations, " << r.solution.selected_contacts.size()
            << " contacts)\n";
  return r;
}

inline constexpr const char* kBaselineCsvHeader =
    "satellites,trial,seed,subset,status,objective,normalized,total_mission_cost,total_data_downlink_bits,"
    "max_gap_s,normalized_cost,normalized_data";

/// Provider-subset baselines for every (constellation size, trial); trial t uses seed + t.
inline Json cmd_baseline(const RunConfig& c, const std::string& out) {
  check_run_config(c);
  const auto sizes = c.constellation_sizes.empty() ? std::vector<int>{c.satellites} : c.constellation_sizes;
  solver::SolveOptions sub, full;
  sub.limits = c.limits;
  sub.limits.time_s = c.subset_time_limit_s;
  full.limits = c.limits;
  std::string csv = std::string(kBaselineCsvHeader) + "\n";
  Json runs = Json::array();
  for (int n : sizes) {
    for (int t = 0; t < c.trials; ++t) {
      const std::uint64_t seed = c.seed + static_cast<std::uint64_t>(t);
      const auto s = build_scenario(c, n, seed);
      const auto cs = detail::find_all_contacts(s);
      analysis::BaselineSummary lower, level;
      if (c.providers == 2) lower = analysis::run_baselines(s, cs, 1, sub);
      level = analysis::run_baselines(s, cs, c.providers, sub, lower.results);
      const auto m = formulation::build_model(s, cs);
      auto opt = full;
      for (const auto* lv : {&lower, &level})
        for (const auto& r : lv->results)
          if (r.solution.has_incumbent()) opt.starts.push_back(analysis::lift_selection(m, cs, r.solution));
      auto sol = solver::solve(m, opt);
      std::optional<solver::MissionMetrics> fm;
      if (sol.has_incumbent()) {
        fm = analysis::compute_metrics(s, cs, sol);
        sol.metrics = fm;
        analysis::apply_normalization(level, *sol.certificate.objective);
      }
      Json rows = Json::array();
      for (const auto& r : level.results) {
        const auto& mm = r.solution.metrics;
        std::optional<double> ncost, ndata;
        if (mm && fm) {
          ncost = analysis::normalize(mm->total_mission_cost, fm->total_mission_cost);
          ndata = analysis::normalize(mm->total_data_downlink, fm->total_data_downlink);
        }
        const std::string name = detail::subset_name(s, r.provider_subset);
        csv += std::to_string(n) + "," + std::to_string(t) + "," + std::to_string(seed) + "," + name + "," +
               solver::to_string(r.solution.certificate.status) + "," + detail::opt_num(r.objective) + "," +
               detail::opt_num(r.normalized_objective) + "," +
               (mm ? detail::num(mm->total_mission_cost) : "") + "," +
               (mm ? detail::num(mm->total_data_downlink) : "") + "," + (mm ? detail::num(mm->max_gap) : "") + "," +
               detail::opt_num(ncost) + "," + detail::opt_num(ndata) + "\n";
        rows.push_back({{"subset", name},
                        {"certificate", detail::certificate_json(r.solution.certificate)},
                        {"objective", detail::opt_json(r.objective)},
                        {"normalized_objective", detail::opt_json(r.normalized_objective)},
                        {"normalized_cost", detail::opt_json(ncost)},
                        {"normalized_data", detail::opt_json(ndata)}});
      }
      Json best = nullptr;
      if (level.best) best = detail::subset_name(s, level.results[*level.best].provider_subset);
      runs.push_back({{"satellites", n},
                      {"trial", t},
                      {"seed", seed},
                      {"full", {{"certificate", detail::certificate_json(sol.certificate)},
                                {"metrics", fm ? detail::metrics_json(s, *fm) : Json(nullptr)}}},
                      {"best_subset", best},
                      {"all_subsets_infeasible", level.all_infeasible},
                      {"subsets", rows}});
    }
  }
  Json doc = {{"providers_per_subset", c.providers}, {"runs", runs}, {"config", run_config_to_json(c)}};
  const auto dir = detail::prepare_out(out);
  detail::write_file(dir / "baseline.csv", csv);
  detail::write_file(dir / "baseline.json", doc.dump(2) + "\n");
  std::cout << "baseline results written to " << (dir / "baseline.csv").string() << "\n";
  return doc;
}

inline constexpr const char* kWindowCsvHeader = "window_days,mean_gap_s,mean_contact_s,contacts_per_day";

inline std::vector<analysis::WindowStats> cmd_window_study(const RunConfig& c, const std::string& out) {
  check_run_config(c);
  const auto ds = model::load_station_dataset(c.stations);
  const auto catalog = astro::parse_tle_catalog(model::read_text_file(c.tles));
  const auto stations = model::filter_stations_by_bands(ds.stations, c.constraints.required_bands,
                                                        c.constraints.include_non_operational);
  contacts::ContactOptions opt;
  opt.min_elevation_deg = c.min_elevation_deg;
  opt.coarse_step_s = c.coarse_step_s;
  opt.propagator = astro::parse_propagator_kind(c.propagator);
  const auto stats = analysis::window_stability_study(catalog.records, stations, c.window_days,
                                                      static_cast<std::size_t>(c.window_sample), c.seed,
                                                      astro::EpochUtc::parse_iso8601(c.start), opt);
  std::string csv = std::string(kWindowCsvHeader) + "\n";
  Json rows = Json::array();
  for (const auto& w : stats) {
    csv += std::to_string(w.window_days) + "," + detail::num(w.mean_gap) + "," +
           detail::num(w.mean_contact_duration) + "," + detail::num(w.mean_contacts_per_day) + "\n";
    rows.push_back({{"window_days", w.window_days},
                    {"mean_gap_s", w.mean_gap},
                    {"mean_contact_s", w.mean_contact_duration},
                    {"contacts_per_day", w.mean_contacts_per_day},
                    {"sample_size", w.sample_size},
                    {"gap_sample_size", w.gap_sample_size}});
  }
  const auto dir = detail::prepare_out(out);
  detail::write_file(dir / "window_study.csv", csv);
  detail::write_file(dir / "window_study.json",
                     Json({{"windows", rows}, {"config", run_config_to_json(c)}}).dump(2) + "\n");
  std::cout << stats.size() << " window rows written to " << (dir / "window_study.csv").string() << "\n";
  return stats;
}

inline formulation::IpModel cmd_export_lp(const RunConfig& c, const std::string& out) {
  const auto s = build_scenario(c);
  const auto cs = detail::find_all_contacts(s);
  auto m = formulation::build_model(s, cs);
  const auto dir = detail::prepare_out(out);
  solver::export_lp(m, (dir / "model.lp").string());
  std::cout << m.variables.size() << " variables, " << m.constraints.size() << " constraints written to "
            << (dir / "model.lp").string() << "\n";
  return m;
}

inline model::Scenario cmd_scenario_gen(const RunConfig& c, const std::string& out) {
  const auto s = build_scenario(c);
  const auto dir = detail::prepare_out(out);
  model::save_scenario(s, (dir / "scenario.json").string());
  std::cout << "scenario written to " << (dir / "scenario.json").string() << "\n";
  return s;
}

}  // namespace gsopt::cli
