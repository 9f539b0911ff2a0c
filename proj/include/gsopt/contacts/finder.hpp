#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "gsopt/astro/propagator.hpp"
#include "gsopt/contacts/geometry.hpp"
#include "gsopt/model/types.hpp"

namespace gsopt::contacts {

using astro::EpochUtc;

struct ContactWindow {
  int id = 0;
  int satellite_id = 0;
  int station_id = 0;
  int provider_id = 0;
  EpochUtc start;
  EpochUtc end;
  double duration = 0.0;       // s, end - start
  double data_rate = 0.0;      // bit/s, min(station rate, satellite rate)
  double max_elevation = 0.0;  // deg, diagnostic only

  bool operator==(const ContactWindow&) const = default;
};

struct ContactOptions {
  double min_elevation_deg = 10.0;
  double coarse_step_s = 30.0;
  double boundary_tolerance_s = 1e-3;  // bisection stops below this bracket width
  astro::PropagatorKind propagator = astro::PropagatorKind::Sgp4;
};

struct SatelliteDiagnostic {
  int satellite_id = 0;
  std::string message;
};

struct ContactSet {
  std::vector<ContactWindow> contacts;
  std::vector<SatelliteDiagnostic> diagnostics;
};

namespace detail {

struct RawWindow {
  int satellite_id;
  int station_id;
  double start;  // s since J2000
  double end;
  double max_elevation;
};

// Vertex of the parabola through three equally spaced samples, clamped to the bracket.
inline double parabolic_peak(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom >= 0.0) return b;
  const double x = 0.5 * (a - c) / denom;
  if (x < -1.0 || x > 1.0) return b;
  return b - 0.25 * (a - c) * x;
}

}  // namespace detail

/// Visibility windows for every satellite-station pair over [t_start, t_end].
/// Satellites that fail to propagate are excluded and reported.
inline ContactSet find_contacts(const std::vector<model::Satellite>& satellites,
                                const std::vector<model::StationLocation>& stations,
                                EpochUtc t_start, EpochUtc t_end, const ContactOptions& opt = {}) {
  if (!(opt.coarse_step_s > 0.0)) throw std::invalid_argument("coarse step must be positive");
  if (!(t_end > t_start)) throw std::invalid_argument("empty contact search window");
  ContactSet out;
  std::vector<detail::RawWindow> raw;

  std::vector<StationFrame> frames;
  frames.reserve(stations.size());
  for (const auto& st : stations) frames.emplace_back(st.geodetic);

  const double span = t_end - t_start;
  const auto steps = static_cast<std::size_t>(std::ceil(span / opt.coarse_step_s - 1e-9));
  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k)
    times[k] = std::min(t_start.seconds_since_j2000() + static_cast<double>(k) * opt.coarse_step_s,
                        t_end.seconds_since_j2000());

  for (const auto& sat : satellites) {
    std::optional<astro::Propagator> prop;
    std::vector<Vec3> track(times.size());
    try {
      prop.emplace(sat.tle, opt.propagator);
      for (std::size_t k = 0; k < times.size(); ++k) track[k] = prop->position_ecef(EpochUtc(times[k]));
    } catch (const std::exception& e) {
      out.diagnostics.push_back({sat.id, e.what()});
      continue;
    }
    // Threshold tests run on sin(elevation).
    const double mask = std::sin(opt.min_elevation_deg * astro::kDegToRad);
    std::vector<double> elev(times.size());
    for (std::size_t si = 0; si < stations.size(); ++si) {
      const StationFrame& frame = frames[si];
      for (std::size_t k = 0; k < times.size(); ++k) elev[k] = frame.sin_elevation(track[k]);
      // Boundary between samples lo (state lo_above) and hi.
      auto refine = [&](double lo, double hi, bool lo_above) {
        while (hi - lo > opt.boundary_tolerance_s) {
          const double mid = 0.5 * (lo + hi);
          const bool above = frame.sin_elevation(prop->position_ecef(EpochUtc(mid))) >= mask;
          (above == lo_above ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
      };
      auto to_deg = [](double sine) {
        return std::asin(std::clamp(sine, -1.0, 1.0)) * astro::kRadToDeg;
      };
      bool open = elev[0] >= mask;
      double start = times[0];
      double peak = open ? elev[0] : -1.0;
      for (std::size_t k = 1; k < times.size(); ++k) {
        const bool above = elev[k] >= mask;
        if (above && !open) {
          open = true;
          start = refine(times[k - 1], times[k], false);
          peak = elev[k];
        } else if (!above && open) {
          open = false;
          const double end = refine(times[k - 1], times[k], true);
          if (end > start) raw.push_back({sat.id, stations[si].id, start, end, to_deg(peak)});
        }
        if (open && elev[k] >= peak) {
          peak = elev[k];
          if (k + 1 < times.size() && elev[k + 1] < elev[k] && elev[k - 1] <= elev[k])
            peak = std::min(1.0, detail::parabolic_peak(elev[k - 1], elev[k], elev[k + 1]));
        }
      }
      if (open && times.back() > start)
        raw.push_back({sat.id, stations[si].id, start, times.back(), to_deg(peak)});
    }
  }

  std::sort(raw.begin(), raw.end(), [](const detail::RawWindow& a, const detail::RawWindow& b) {
    return std::tie(a.satellite_id, a.start, a.station_id) <
           std::tie(b.satellite_id, b.start, b.station_id);
  });
  auto find_sat = [&](int id) -> const model::Satellite& {
    return *std::find_if(satellites.begin(), satellites.end(),
                         [&](const model::Satellite& s) { return s.id == id; });
  };
  auto find_station = [&](int id) -> const model::StationLocation& {
    return *std::find_if(stations.begin(), stations.end(),
                         [&](const model::StationLocation& s) { return s.id == id; });
  };
  out.contacts.reserve(raw.size());
  for (const auto& w : raw) {
    const auto& st = find_station(w.station_id);
    ContactWindow c;
    c.id = static_cast<int>(out.contacts.size());
    c.satellite_id = w.satellite_id;
    c.station_id = w.station_id;
    c.provider_id = st.provider_id;
    c.start = EpochUtc(w.start);
    c.end = EpochUtc(w.end);
    c.duration = c.end - c.start;
    c.data_rate = std::min(st.data_rate, find_sat(w.satellite_id).data_rate);
    c.max_elevation = w.max_elevation;
    out.contacts.push_back(c);
  }
  return out;
}

inline ContactSet find_contacts(const model::Scenario& s) {
  ContactOptions opt;
  opt.min_elevation_deg = s.min_elevation_deg;
  opt.coarse_step_s = s.coarse_step_s;
  opt.propagator = s.propagator;
  return find_contacts(s.satellites, s.stations, s.t_sim_start, s.t_sim_end, opt);
}

/// Re-derives data rates and provider links after the scenario constants changed.
inline void refresh_contact_constants(std::vector<ContactWindow>& contacts, const model::Scenario& s) {
  for (auto& c : contacts) {
    const auto& st = s.station(c.station_id);
    c.provider_id = st.provider_id;
    c.data_rate = std::min(st.data_rate, s.satellite(c.satellite_id).data_rate);
  }
}

/// Keeps contacts overlapping [t_start, t_end], clipped to it, renumbered in order.
inline std::vector<ContactWindow> clip_contacts(const std::vector<ContactWindow>& contacts,
                                                EpochUtc t_start, EpochUtc t_end) {
  std::vector<ContactWindow> out;
  for (auto c : contacts) {
    c.start = std::max(c.start, t_start);
    c.end = std::min(c.end, t_end);
    if (!(c.end > c.start)) continue;
    c.duration = c.end - c.start;
    out.push_back(c);
  }
  std::stable_sort(out.begin(), out.end(), [](const ContactWindow& a, const ContactWindow& b) {
    return std::tie(a.satellite_id, a.start, a.station_id) <
           std::tie(b.satellite_id, b.start, b.station_id);
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += "\"\"";
    else q += ch;
  }
  return q + "\"";
}

}  // namespace detail

inline constexpr const char* kContactsCsvHeader =
    "id,satellite,provider,station,start_iso,end_iso,duration_s,data_rate_bps,max_elevation_deg";

inline std::string contacts_to_csv(const std::vector<ContactWindow>& contacts,
                                   const model::Scenario& s) {
  std::string out = std::string(kContactsCsvHeader) + "\n";
  char buf[256];
  for (const auto& c : contacts) {
    const auto& st = s.station(c.station_id);
    out += std::to_string(c.id) + "," + detail::csv_field(s.satellite(c.satellite_id).name) + "," +
           detail::csv_field(s.provider(st.provider_id).name) + "," + detail::csv_field(st.name) +
           "," + c.start.to_iso8601() + "," + c.end.to_iso8601() + ",";
    std::snprintf(buf, sizeof buf, "%.3f,%.17g,%.3f\n", c.duration, c.data_rate, c.max_elevation);
    out += buf;
  }
  return out;
}

}  // namespace gsopt::contacts
