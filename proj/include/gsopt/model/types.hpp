#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gsopt/astro/epoch.hpp"
#include "gsopt/astro/geodesy.hpp"
#include "gsopt/astro/propagator.hpp"
#include "gsopt/astro/tle.hpp"

namespace gsopt::model {

using astro::EpochUtc;
using astro::GeodeticPoint;

/// Raised for invalid user configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Band { UHF, L, S, X, Ka };
using BandSet = std::set<Band>;

inline std::string_view to_string(Band b) {
  switch (b) {
    case Band::UHF: return "UHF";
    case Band::L: return "L";
    case Band::S: return "S";
    case Band::X: return "X";
    case Band::Ka: return "Ka";
  }
  return "?";
}

inline std::optional<Band> parse_band(std::string_view s) {
  if (s == "UHF") return Band::UHF;
  if (s == "L") return Band::L;
  if (s == "S") return Band::S;
  if (s == "X") return Band::X;
  if (s == "Ka") return Band::Ka;
  return std::nullopt;
}

enum class StationStatus { Operational, Planned, Potential, Decommissioned };

inline std::string_view to_string(StationStatus s) {
  switch (s) {
    case StationStatus::Operational: return "Operational";
    case StationStatus::Planned: return "Planned";
    case StationStatus::Potential: return "Potential";
    case StationStatus::Decommissioned: return "Decommissioned";
  }
  return "?";
}

inline std::optional<StationStatus> parse_status(std::string_view s) {
  if (s == "Operational") return StationStatus::Operational;
  if (s == "Planned") return StationStatus::Planned;
  if (s == "Potential") return StationStatus::Potential;
  if (s == "Decommissioned" || s == "Decomissioned") return StationStatus::Decommissioned;
  return std::nullopt;
}

struct Provider {
  int id = 0;
  std::string name;
  double integration_cost = 0.0;  // e^P_integ, one-time

  bool operator==(const Provider&) const = default;
};

struct StationLocation {
  int id = 0;
  int provider_id = 0;
  std::string name;
  std::string country;
  GeodeticPoint geodetic;
  BandSet bands;
  StationStatus status = StationStatus::Operational;
  double data_rate = 0.0;        // L_dr, bit/s
  double setup_cost = 0.0;       // e^L_setup
  double monthly_cost = 0.0;     // e^L_monthly
  double license_cost = 0.0;     // e^L_license, per satellite
  double per_pass_cost = 0.0;    // e^L_pass
  double per_minute_cost = 0.0;  // e^L_minute

  /// Cost of one contact of `duration_s` seconds under this station's pricing.
  [[nodiscard]] double contact_cost(double duration_s) const noexcept {
    return per_minute_cost * (duration_s / 60.0) + per_pass_cost;
  }

  bool operator==(const StationLocation& o) const {
    return id == o.id && provider_id == o.provider_id && name == o.name && country == o.country &&
           geodetic.latitude_deg == o.geodetic.latitude_deg &&
           geodetic.longitude_deg == o.geodetic.longitude_deg &&
           geodetic.altitude_m == o.geodetic.altitude_m && bands == o.bands &&
           status == o.status && data_rate == o.data_rate && setup_cost == o.setup_cost &&
           monthly_cost == o.monthly_cost && license_cost == o.license_cost &&
           per_pass_cost == o.per_pass_cost && per_minute_cost == o.per_minute_cost;
  }
};

struct Satellite {
  int id = 0;
  std::string name;
  astro::TleRecord tle;
  double data_rate = 0.0;  // S_dr, bit/s
  BandSet supported_bands;

  bool operator==(const Satellite& o) const {
    return id == o.id && name == o.name && tle.line1 == o.tle.line1 && tle.line2 == o.tle.line2 &&
           data_rate == o.data_rate && supported_bands == o.supported_bands;
  }
};

enum class Objective { MinCost, MaxData, MinMaxGap };

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::MinCost: return "min_cost";
    case Objective::MaxData: return "max_data";
    case Objective::MinMaxGap: return "min_max_gap";
  }
  return "?";
}

inline Objective parse_objective(std::string_view s) {
  if (s == "min_cost") return Objective::MinCost;
  if (s == "max_data") return Objective::MaxData;
  if (s == "min_max_gap") return Objective::MinMaxGap;
  throw ConfigError("unknown objective '" + std::string(s) +
                    "' (expected min_cost, max_data or min_max_gap)");
}

/// Constraint families; an empty optional disables the family.
struct ConstraintConfig {
  Objective objective = Objective::MinCost;
  std::optional<double> d_min;          // bits per sliding window, whole constellation
  std::optional<double> d_s_min;        // bits per sliding window, per satellite
  double t_period = 86400.0;            // s
  double t_step = 3600.0;               // s
  std::optional<double> e_max;          // currency per month
  bool station_exclusion = true;
  bool satellite_exclusion = true;
  std::optional<double> g_max_limit;    // s
  std::optional<int> p_max;
  std::optional<double> t_min;          // s
  std::optional<int> n_min;             // contacts per sliding window, per satellite
  std::vector<std::string> required_providers;
  std::vector<std::string> required_locations;  // "Provider/Location" or unique location name
  std::optional<int> m_min;
  std::optional<int> m_max;
  BandSet required_bands;
  bool include_non_operational = false;
  bool count_boundary_gaps = false;     // adds virtual events at the simulation boundaries
  int successor_horizon = 25;           // gap successors considered per contact

  bool operator==(const ConstraintConfig&) const = default;

  /// Design-table defaults composed per objective.
  static ConstraintConfig defaults_for(Objective o) {
    ConstraintConfig c;
    c.objective = o;
    c.t_min = 180.0;
    if (o == Objective::MinCost || o == Objective::MinMaxGap) c.d_s_min = 1e11;
    if (o == Objective::MaxData || o == Objective::MinMaxGap) c.e_max = 1e6;
    return c;
  }
};

struct Scenario {
  std::vector<Satellite> satellites;
  std::vector<Provider> providers;
  std::vector<StationLocation> stations;
  EpochUtc t_sim_start;
  EpochUtc t_sim_end;
  EpochUtc t_opt_start;
  EpochUtc t_opt_end;
  ConstraintConfig config;
  std::uint64_t rng_seed = 0;
  double min_elevation_deg = 10.0;
  double coarse_step_s = 30.0;
  astro::PropagatorKind propagator = astro::PropagatorKind::Sgp4;

  [[nodiscard]] double t_sim() const { return t_sim_end - t_sim_start; }
  [[nodiscard]] double t_opt() const { return t_opt_end - t_opt_start; }

  [[nodiscard]] const Provider& provider(int id) const {
    for (const auto& p : providers)
      if (p.id == id) return p;
    throw std::out_of_range("unknown provider id " + std::to_string(id));
  }
  [[nodiscard]] const StationLocation& station(int id) const {
    for (const auto& s : stations)
      if (s.id == id) return s;
    throw std::out_of_range("unknown station id " + std::to_string(id));
  }
  [[nodiscard]] const Satellite& satellite(int id) const {
    for (const auto& s : satellites)
      if (s.id == id) return s;
    throw std::out_of_range("unknown satellite id " + std::to_string(id));
  }

  bool operator==(const Scenario&) const = default;
};

/// Design-table epochs: 7-day simulation, 365-day mission, both starting 2024-09-11.
inline void apply_default_windows(Scenario& s) {
  s.t_sim_start = EpochUtc::from_calendar(2024, 9, 11);
  s.t_sim_end = EpochUtc::from_calendar(2024, 9, 18);
  s.t_opt_start = EpochUtc::from_calendar(2024, 9, 11);
  s.t_opt_end = EpochUtc::from_calendar(2025, 9, 11);
}

/// Checks structural invariants of a scenario and its configuration. Throws ConfigError.
inline void validate(const Scenario& s) {
  if (!(s.t_sim() > 0.0)) throw ConfigError("simulation window must have positive length");
  if (s.t_opt() < s.t_sim()) throw ConfigError("optimization window shorter than simulation window");
  if (!(s.coarse_step_s > 0.0)) throw ConfigError("coarse_step_s must be positive");
  if (s.min_elevation_deg < -90.0 || s.min_elevation_deg > 90.0)
    throw ConfigError("min_elevation_deg outside [-90, 90]");
  const auto& c = s.config;
  if (!(c.t_step > 0.0)) throw ConfigError("t_step must be positive");
  if (!(c.t_period > 0.0) || c.t_period > s.t_sim())
    throw ConfigError("t_period must lie in (0, T_sim]");
  if (c.m_min && c.m_max && *c.m_min > *c.m_max) throw ConfigError("m_min exceeds m_max");
  if (c.successor_horizon < 1) throw ConfigError("successor_horizon must be at least 1");
  auto nonneg = [](const std::optional<double>& v, const char* name) {
    if (v && !(*v >= 0.0)) throw ConfigError(std::string(name) + " must be non-negative");
  };
  nonneg(c.d_min, "d_min");
  nonneg(c.d_s_min, "d_s_min");
  nonneg(c.e_max, "e_max");
  nonneg(c.g_max_limit, "g_max_limit");
  nonneg(c.t_min, "t_min");
  if (c.objective == Objective::MaxData && !c.e_max)
    throw ConfigError(
        "max_data requires e_max: the monthly operational cost cap is mandatory, otherwise "
        "selecting every provider and location is trivially optimal");
  if (c.objective == Objective::MinMaxGap && (!c.e_max || !c.d_s_min))
    throw ConfigError("min_max_gap requires both e_max and d_s_min to exclude degenerate solutions");
  if (c.objective == Objective::MinMaxGap && c.g_max_limit)
    throw ConfigError("g_max_limit cannot be combined with the min_max_gap objective");
  for (const auto& p : s.providers)
    if (!(p.integration_cost >= 0.0)) throw ConfigError("negative integration cost: " + p.name);
  for (const auto& st : s.stations) {
    if (!(st.data_rate > 0.0)) throw ConfigError("station data rate must be positive: " + st.name);
    for (double v : {st.setup_cost, st.monthly_cost, st.license_cost, st.per_pass_cost,
                     st.per_minute_cost})
      if (!(v >= 0.0)) throw ConfigError("negative station cost: " + st.name);
  }
  for (const auto& sat : s.satellites)
    if (!(sat.data_rate > 0.0)) throw ConfigError("satellite data rate must be positive: " + sat.name);
}

}  // namespace gsopt::model
