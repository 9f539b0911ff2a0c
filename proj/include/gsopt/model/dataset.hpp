#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gsopt/model/types.hpp"

namespace gsopt::model {

struct RowDiagnostic {
  int line_number = 0;
  std::string message;
};

struct StationDataset {
  std::vector<Provider> providers;
  std::vector<StationLocation> stations;
  std::vector<RowDiagnostic> diagnostics;
};

// Mid-range constants used until a scenario is randomized. Pass pricing keeps exactly one
// pricing mode active.
inline constexpr double kDefaultIntegrationCost = 125000.0;
inline constexpr double kDefaultSetupCost = 55000.0;
inline constexpr double kDefaultMonthlyCost = 2600.0;
inline constexpr double kDefaultLicenseCost = 3000.0;
inline constexpr double kDefaultPassCost = 100.0;
inline constexpr double kDefaultStationRate = 1.5e9;
inline constexpr double kDefaultSatelliteRate = 1.35e9;

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(astro::detail::trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(astro::detail::trim(cur));
  return out;
}

}  // namespace detail

/// Parses the station CSV text (provider,location,country,longitude_deg,latitude_deg,bands,status).
/// Providers are numbered in order of first appearance; bad rows are rejected with a diagnostic.
inline StationDataset parse_station_csv(const std::string& text) {
  StationDataset out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::map<std::string, int> provider_ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (astro::detail::trim(line).empty() || line[0] == '#') continue;
    const auto f = detail::split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (f.size() >= 1 && f[0] == "provider") continue;
    }
    if (f.size() != 7) {
      out.diagnostics.push_back({line_no, "expected 7 columns, found " + std::to_string(f.size())});
      continue;
    }
    const auto lon = astro::detail::parse_double(f[3]);
    const auto lat = astro::detail::parse_double(f[4]);
    if (!lon || !lat) {
      out.diagnostics.push_back({line_no, "missing or invalid coordinate"});
      continue;
    }
    if (*lat < -90.0 || *lat > 90.0 || *lon < -180.0 || *lon > 180.0) {
      out.diagnostics.push_back({line_no, "coordinate out of range"});
      continue;
    }
    BandSet bands;
    std::string bad_band;
    std::istringstream bs(f[5]);
    std::string tok;
    while (std::getline(bs, tok, ';')) {
      tok = astro::detail::trim(tok);
      if (tok.empty()) continue;
      if (auto b = parse_band(tok)) bands.insert(*b);
      else bad_band = tok;
    }
    if (!bad_band.empty()) {
      out.diagnostics.push_back({line_no, "unknown band token '" + bad_band + "'"});
      continue;
    }
    const auto status = parse_status(f[6]);
    if (!status) {
      out.diagnostics.push_back({line_no, "unknown status '" + f[6] + "'"});
      continue;
    }
    if (f[0].empty() || f[1].empty()) {
      out.diagnostics.push_back({line_no, "missing provider or location name"});
      continue;
    }
    auto [it, inserted] = provider_ids.try_emplace(f[0], static_cast<int>(out.providers.size()));
    if (inserted) out.providers.push_back({it->second, f[0], kDefaultIntegrationCost});
    StationLocation st;
    st.id = static_cast<int>(out.stations.size());
    st.provider_id = it->second;
    st.name = f[1];
    st.country = f[2];
    st.geodetic = {*lat, *lon, 0.0};
    st.bands = std::move(bands);
    st.status = *status;
    st.data_rate = kDefaultStationRate;
    st.setup_cost = kDefaultSetupCost;
    st.monthly_cost = kDefaultMonthlyCost;
    st.license_cost = kDefaultLicenseCost;
    st.per_pass_cost = kDefaultPassCost;
    st.per_minute_cost = 0.0;
    out.stations.push_back(std::move(st));
  }
  return out;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline StationDataset load_station_dataset(const std::string& path) {
  return parse_station_csv(read_text_file(path));
}

#ifdef GSOPT_DATA_DIR
inline std::string bundled_data_path(const std::string& file) {
  return std::string(GSOPT_DATA_DIR) + "/" + file;
}
#endif

/// Keeps stations supporting every required band; non-operational rows are dropped unless asked.
inline std::vector<StationLocation> filter_stations_by_bands(
    const std::vector<StationLocation>& stations, const BandSet& required_bands,
    bool include_non_operational = false) {
  std::vector<StationLocation> out;
  for (const auto& s : stations) {
    if (!include_non_operational && s.status != StationStatus::Operational) continue;
    if (!std::includes(s.bands.begin(), s.bands.end(), required_bands.begin(), required_bands.end()))
      continue;
    out.push_back(s);
  }
  return out;
}

/// Drops providers that no longer own any station.
inline std::vector<Provider> providers_in_use(const std::vector<Provider>& providers,
                                              const std::vector<StationLocation>& stations) {
  std::vector<Provider> out;
  for (const auto& p : providers) {
    if (std::any_of(stations.begin(), stations.end(),
                    [&](const StationLocation& s) { return s.provider_id == p.id; }))
      out.push_back(p);
  }
  return out;
}

/// Wraps parsed TLE records as satellites with default data rate and ids in catalog order.
inline std::vector<Satellite> satellites_from_catalog(const std::vector<astro::TleRecord>& records) {
  std::vector<Satellite> out;
  for (const auto& r : records) {
    Satellite s;
    s.id = static_cast<int>(out.size());
    s.name = r.name;
    s.tle = r;
    s.data_rate = kDefaultSatelliteRate;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace gsopt::model
