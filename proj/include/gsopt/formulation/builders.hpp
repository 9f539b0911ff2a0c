#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "gsopt/contacts/finder.hpp"
#include "gsopt/formulation/model.hpp"
#include "gsopt/model/types.hpp"

namespace gsopt::formulation {

using contacts::ContactWindow;
using model::ConfigError;
using model::Scenario;

inline constexpr double kSecondsPerMonth = 365.25 * 86400.0 / 12.0;  // 2 629 800 s

struct ScaleFactors {
  double mission_over_sim = 0.0;
  double months_in_mission = 0.0;
  double per_month_from_sim = 0.0;
};

inline ScaleFactors scale_factors(double t_sim, double t_opt) {
  ScaleFactors f;
  f.mission_over_sim = t_opt / t_sim;
  f.months_in_mission = t_opt / kSecondsPerMonth;
  f.per_month_from_sim = kSecondsPerMonth / t_sim;
  return f;
}

inline ScaleFactors scale_factors(const Scenario& s) { return scale_factors(s.t_sim(), s.t_opt()); }

/// Family labels and the role each plays in the program.
inline const std::map<std::string, std::string>& family_roles() {
  static const std::map<std::string, std::string> roles = {
      {"location_link", "selected contact implies its location"},
      {"provider_link", "selected location implies its provider"},
      {"license_link", "selected contact implies the satellite-location license"},
      {"station_exclusion", "a location serves one satellite at a time"},
      {"satellite_exclusion", "a satellite talks to one location at a time"},
      {"constellation_downlink", "constellation data volume per sliding period"},
      {"satellite_downlink", "per-satellite data volume per sliding period"},
      {"monthly_cost_cap", "monthly operational cost cap"},
      {"gap_successor", "each selected contact has exactly one successor"},
      {"gap_bound", "successor gap bounded by the maximum gap"},
      {"gap_pred_link", "successor pair implies its first contact"},
      {"gap_succ_link", "successor pair implies its second contact"},
      {"gap_boundary", "virtual simulation-start event has one successor"},
      {"provider_cap", "maximum number of providers"},
      {"contacts_per_period", "per-satellite contact count per sliding period"},
      {"required_provider", "provider fixed as selected"},
      {"required_location", "location fixed as selected"},
      {"location_count_min", "minimum number of locations"},
      {"location_count_max", "maximum number of locations"},
  };
  return roles;
}

namespace detail {

inline std::string sanitize(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    const bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
                    ch == '_';
    out += ok ? ch : '_';
  }
  return out;
}

// Shared build state: tag uniqueness and the contact index.
struct Builder {
  IpModel& m;
  const Scenario& s;
  const std::vector<ContactWindow>& contacts;
  std::set<std::string> used_tags;
  std::unordered_map<int, const ContactWindow*> by_id;

  Builder(IpModel& model, const Scenario& scenario, const std::vector<ContactWindow>& cs)
      : m(model), s(scenario), contacts(cs) {
    for (const auto& v : m.variables) used_tags.insert(v.tag);
    for (const auto& c : contacts) by_id[c.id] = &c;
  }

  std::string unique(std::string tag) {
    if (used_tags.insert(tag).second) return tag;
    for (int k = 2;; ++k) {
      auto t = tag + "_" + std::to_string(k);
      if (used_tags.insert(t).second) return t;
    }
  }

  std::string sat_name(int id) const { return sanitize(s.satellite(id).name); }
  std::string station_name(int id) const {
    const auto& st = s.station(id);
    return sanitize(s.provider(st.provider_id).name) + "_" + sanitize(st.name);
  }

  bool eligible(const ContactWindow& c) const {
    return m.variables[static_cast<std::size_t>(m.contact_var.at(c.id))].hi > 0.0;
  }

  void add(std::vector<Term> terms, Sense sense, double rhs, const std::string& tag,
           const std::string& family) {
    m.add_constraint(std::move(terms), sense, rhs, tag, family);
    m.provenance[family] = family_roles().at(family);
  }
};

inline void check_contacts(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  std::set<int> ids;
  for (const auto& c : contacts) {
    if (!ids.insert(c.id).second) throw std::invalid_argument("duplicate contact id");
    (void)s.station(c.station_id);
    (void)s.satellite(c.satellite_id);
    if (!(c.end >= c.start)) throw std::invalid_argument("contact ends before it starts");
  }
}

// Contacts grouped by key, each group sorted by (start, id).
template <typename Key>
std::map<int, std::vector<const ContactWindow*>> group_by(const std::vector<ContactWindow>& contacts,
                                                          Key key) {
  std::map<int, std::vector<const ContactWindow*>> g;
  for (const auto& c : contacts) g[key(c)].push_back(&c);
  for (auto& [k, v] : g)
    std::stable_sort(v.begin(), v.end(), [](const ContactWindow* a, const ContactWindow* b) {
      return a->start < b->start || (a->start == b->start && a->id < b->id);
    });
  return g;
}

// Variables in order c, l, p, v. Contacts shorter than t_min are fixed to zero.
inline void add_core_variables(Builder& b) {
  IpModel& m = b.m;
  const Scenario& s = b.s;
  for (const auto& c : b.contacts) {
    const bool short_contact = s.config.t_min && c.duration < *s.config.t_min;
    m.contact_var[c.id] =
        m.add_variable(VarKind::Contact, b.unique("c" + std::to_string(c.id)), 0.0,
                       short_contact ? 0.0 : 1.0, true, c.id, c.satellite_id);
  }
  for (const auto& st : s.stations)
    m.location_var[st.id] = m.add_variable(VarKind::Location, b.unique("l_" + b.station_name(st.id)),
                                           0.0, 1.0, true, st.id);
  std::set<int> providers_with_stations;
  for (const auto& st : s.stations) providers_with_stations.insert(st.provider_id);
  std::set<std::string> required(s.config.required_providers.begin(),
                                 s.config.required_providers.end());
  for (const auto& p : s.providers) {
    if (!providers_with_stations.count(p.id) && !required.count(p.name)) continue;
    m.provider_var[p.id] =
        m.add_variable(VarKind::Provider, b.unique("p_" + sanitize(p.name)), 0.0, 1.0, true, p.id);
  }
}

}  // namespace detail

/// Big-M linking rows: contact -> location, location -> provider, contact -> license.
/// Creates the license variables for satellite-location pairs with contacts.
inline void linking_constraints(IpModel& m, const Scenario& s,
                                const std::vector<ContactWindow>& contacts) {
  detail::Builder b(m, s, contacts);
  const auto by_station = detail::group_by(contacts, [](const ContactWindow& c) { return c.station_id; });
  for (const auto& st : s.stations) {
    auto it = by_station.find(st.id);
    if (it == by_station.end()) continue;
    std::vector<Term> t;
    for (const auto* c : it->second) t.emplace_back(m.contact_var.at(c->id), 1.0);
    t.emplace_back(m.location_var.at(st.id), -static_cast<double>(it->second.size()));
    b.add(std::move(t), Sense::Le, 0.0, "loc_link_" + b.station_name(st.id), "location_link");
  }
  for (const auto& p : s.providers) {
    if (!m.provider_var.count(p.id)) continue;
    std::vector<Term> t;
    for (const auto& st : s.stations)
      if (st.provider_id == p.id) t.emplace_back(m.location_var.at(st.id), 1.0);
    if (t.empty()) continue;
    const double n = static_cast<double>(t.size());
    t.emplace_back(m.provider_var.at(p.id), -n);
    b.add(std::move(t), Sense::Le, 0.0, "prov_link_" + detail::sanitize(p.name), "provider_link");
  }
  std::map<std::pair<int, int>, std::vector<int>> pairs;
  for (const auto& c : contacts) pairs[{c.satellite_id, c.station_id}].push_back(c.id);
  // Pair order follows satellite order, then station order in the scenario.
  std::unordered_map<int, int> station_pos;
  for (std::size_t k = 0; k < s.stations.size(); ++k) station_pos[s.stations[k].id] = static_cast<int>(k);
  std::vector<std::pair<int, int>> keys;
  for (const auto& kv : pairs) keys.push_back(kv.first);
  std::stable_sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b2) {
    return std::make_pair(a.first, station_pos.at(a.second)) <
           std::make_pair(b2.first, station_pos.at(b2.second));
  });
  for (const auto& key : keys) {
    const auto& ids = pairs.at(key);
    const auto& st = s.station(key.second);
    const int v = m.add_variable(VarKind::VehicleLicense,
                                 b.unique("v_" + b.sat_name(key.first) + "_" + b.station_name(st.id)),
                                 0.0, 1.0, true, st.id, key.first);
    std::vector<Term> t;
    for (int id : ids) t.emplace_back(m.contact_var.at(id), 1.0);
    t.emplace_back(v, -static_cast<double>(ids.size()));
    b.add(std::move(t), Sense::Le, 0.0, "lic_link_" + b.sat_name(key.first) + "_" + b.station_name(st.id),
          "license_link");
  }
}

/// Pairwise exclusion rows c_i + c_j <= 1 for overlapping closed intervals, built with a sweep.
inline void exclusion_constraints(IpModel& m, const Scenario& s,
                                  const std::vector<ContactWindow>& contacts, bool per_station,
                                  bool per_satellite) {
  detail::Builder b(m, s, contacts);
  auto sweep = [&](const std::map<int, std::vector<const ContactWindow*>>& groups,
                   const std::string& prefix, const std::string& family) {
    for (const auto& [key, list] : groups) {
      std::vector<const ContactWindow*> el;
      for (const auto* c : list)
        if (b.eligible(*c)) el.push_back(c);
      for (std::size_t i = 0; i < el.size(); ++i) {
        for (std::size_t j = i + 1; j < el.size() && el[j]->start <= el[i]->end; ++j) {
          const int a = std::min(el[i]->id, el[j]->id);
          const int z = std::max(el[i]->id, el[j]->id);
          b.add({{m.contact_var.at(a), 1.0}, {m.contact_var.at(z), 1.0}}, Sense::Le, 1.0,
                prefix + std::to_string(a) + "_" + std::to_string(z), family);
        }
      }
    }
  };
  if (per_station)
    sweep(detail::group_by(contacts, [](const ContactWindow& c) { return c.station_id; }),
          "st_excl_", "station_exclusion");
  if (per_satellite)
    sweep(detail::group_by(contacts, [](const ContactWindow& c) { return c.satellite_id; }),
          "sat_excl_", "satellite_exclusion");
}

/// Start times of the sliding periods over the simulation window.
inline std::vector<double> window_starts(double t_sim_start, double t_sim, double t_period,
                                         double t_step) {
  std::vector<double> out;
  if (t_period > t_sim + 1e-9) return out;
  const auto n = static_cast<long>(std::floor((t_sim - t_period) / t_step + 1e-9)) + 1;
  for (long k = 0; k < n; ++k) out.push_back(t_sim_start + static_cast<double>(k) * t_step);
  return out;
}

namespace detail {

// One row per sliding period; a contact counts fully in every period it intersects.
template <typename Coef>
void sliding_rows(Builder& b, const std::vector<const ContactWindow*>& list, double rhs,
                  const std::string& prefix, const std::string& family, Coef coef) {
  const auto& s = b.s;
  const auto starts =
      window_starts(s.t_sim_start.seconds_since_j2000(), s.t_sim(), s.config.t_period, s.config.t_step);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    const double ws = starts[k];
    const double we = ws + s.config.t_period;
    std::vector<Term> t;
    for (const auto* c : list) {
      if (c->start.seconds_since_j2000() <= we && c->end.seconds_since_j2000() >= ws)
        t.emplace_back(b.m.contact_var.at(c->id), coef(*c));
    }
    std::sort(t.begin(), t.end());
    b.add(std::move(t), Sense::Ge, rhs, prefix + std::to_string(k), family);
  }
}

inline double contact_data(const ContactWindow& c) { return c.data_rate * c.duration; }

}  // namespace detail

inline void satellite_downlink_constraints(IpModel& m, const Scenario& s,
                                           const std::vector<ContactWindow>& contacts, double d_s_min) {
  detail::Builder b(m, s, contacts);
  const auto by_sat = detail::group_by(contacts, [](const ContactWindow& c) { return c.satellite_id; });
  for (const auto& sat : s.satellites) {
    auto it = by_sat.find(sat.id);
    const std::vector<const ContactWindow*> none;
    detail::sliding_rows(b, it == by_sat.end() ? none : it->second, d_s_min,
                         "sat_dl_" + b.sat_name(sat.id) + "_", "satellite_downlink", detail::contact_data);
  }
}

inline void monthly_cost_constraint(IpModel& m, const Scenario& s,
                                    const std::vector<ContactWindow>& contacts, double e_max) {
  detail::Builder b(m, s, contacts);
  const auto f = scale_factors(s);
  std::vector<Term> t;
  for (const auto& c : contacts) {
    const double a = f.per_month_from_sim * s.station(c.station_id).contact_cost(c.duration);
    if (a != 0.0) t.emplace_back(m.contact_var.at(c.id), a);
  }
  for (const auto& st : s.stations)
    if (st.monthly_cost != 0.0) t.emplace_back(m.location_var.at(st.id), st.monthly_cost);
  b.add(std::move(t), Sense::Le, e_max, "monthly_cost", "monthly_cost_cap");
}

/// Successor-pair machinery for the maximum gap. With `gmax_var` >= 0 the gap rows read
/// gap*y - G <= 0; otherwise gap*y <= `limit`.
inline void gap_constraints(IpModel& m, const Scenario& s, const std::vector<ContactWindow>& contacts,
                            int gmax_var, double limit) {
  detail::Builder b(m, s, contacts);
  const auto by_sat = detail::group_by(contacts, [](const ContactWindow& c) { return c.satellite_id; });
  const int horizon = std::max(1, s.config.successor_horizon);
  const bool boundary = s.config.count_boundary_gaps;
  const double t0 = s.t_sim_start.seconds_since_j2000();
  const double t1 = s.t_sim_end.seconds_since_j2000();

  auto gap_row = [&](int y, double gap, const std::string& tag) {
    if (gmax_var >= 0)
      b.add({{y, gap}, {gmax_var, -1.0}}, Sense::Le, 0.0, tag, "gap_bound");
    else
      b.add({{y, gap}}, Sense::Le, limit, tag, "gap_bound");
  };

  for (const auto& sat : s.satellites) {
    std::vector<const ContactWindow*> el;
    if (auto it = by_sat.find(sat.id); it != by_sat.end())
      for (const auto* c : it->second)
        if (b.eligible(*c)) el.push_back(c);
    const std::string sn = b.sat_name(sat.id);
    const std::size_t n = el.size();

    if (boundary) {
      std::vector<Term> succ;
      const std::size_t lim = std::min(n, static_cast<std::size_t>(horizon));
      if (n > lim) m.successor_horizon_truncated = true;
      for (std::size_t j = 0; j < lim; ++j) {
        const auto* cj = el[j];
        const std::string id = sn + "_start_" + std::to_string(cj->id);
        const int y = m.add_variable(VarKind::GapSuccessor, b.unique("y_" + id), 0.0, 1.0, true, -1,
                                     sat.id);
        succ.emplace_back(y, 1.0);
        gap_row(y, cj->start.seconds_since_j2000() - t0, "gap_" + id);
        b.add({{y, 1.0}, {m.contact_var.at(cj->id), -1.0}}, Sense::Le, 0.0, "succ_" + id, "gap_succ_link");
      }
      const std::string id = sn + "_start_end";
      const int y = m.add_variable(VarKind::GapSuccessor, b.unique("y_" + id), 0.0, 1.0, true, -1, sat.id);
      succ.emplace_back(y, 1.0);
      gap_row(y, t1 - t0, "gap_" + id);
      b.add(std::move(succ), Sense::Eq, 1.0, "next_" + sn + "_start", "gap_boundary");
    }

    for (std::size_t i = 0; i < n; ++i) {
      const auto* ci = el[i];
      const int xi = m.contact_var.at(ci->id);
      std::size_t first = i + 1;
      while (first < n && !(el[first]->start > ci->start)) ++first;
      const std::size_t last = std::min(n, first + static_cast<std::size_t>(horizon));
      if (last < n) m.successor_horizon_truncated = true;
      std::vector<Term> succ;
      for (std::size_t j = first; j < last; ++j) {
        const auto* cj = el[j];
        const std::string id = sn + "_" + std::to_string(ci->id) + "_" + std::to_string(cj->id);
        const int y = m.add_variable(VarKind::GapSuccessor, b.unique("y_" + id), 0.0, 1.0, true, ci->id,
                                     sat.id);
        succ.emplace_back(y, 1.0);
        gap_row(y, cj->start.seconds_since_j2000() - ci->end.seconds_since_j2000(), "gap_" + id);
        b.add({{y, 1.0}, {xi, -1.0}}, Sense::Le, 0.0, "pred_" + id, "gap_pred_link");
        b.add({{y, 1.0}, {m.contact_var.at(cj->id), -1.0}}, Sense::Le, 0.0, "succ_" + id, "gap_succ_link");
      }
      if (boundary) {
        const std::string id = sn + "_" + std::to_string(ci->id) + "_end";
        const int y = m.add_variable(VarKind::GapSuccessor, b.unique("y_" + id), 0.0, 1.0, true, ci->id,
                                     sat.id);
        succ.emplace_back(y, 1.0);
        gap_row(y, t1 - ci->end.seconds_since_j2000(), "gap_" + id);
        b.add({{y, 1.0}, {xi, -1.0}}, Sense::Le, 0.0, "pred_" + id, "gap_pred_link");
      }
      if (succ.empty()) continue;  // chronologically last contact: no successor row
      succ.emplace_back(xi, -1.0);
      b.add(std::move(succ), Sense::Eq, 0.0, "next_" + sn + "_" + std::to_string(ci->id), "gap_successor");
    }
  }
}

namespace detail {

inline IpModel core_model(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  check_contacts(s, contacts);
  IpModel m;
  Builder b(m, s, contacts);
  add_core_variables(b);
  linking_constraints(m, s, contacts);
  exclusion_constraints(m, s, contacts, s.config.station_exclusion, s.config.satellite_exclusion);
  return m;
}

}  // namespace detail

/// Total-cost objective over the mission with the per-satellite downlink floor.
inline IpModel build_min_cost(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  IpModel m = detail::core_model(s, contacts);
  const auto f = scale_factors(s);
  auto& obj = m.objective;
  obj.minimize = true;
  for (const auto& c : contacts) {
    const double a = f.mission_over_sim * s.station(c.station_id).contact_cost(c.duration);
    if (a != 0.0) obj.terms.emplace_back(m.contact_var.at(c.id), a);
  }
  for (const auto& v : m.variables) {
    double a = 0.0;
    if (v.kind == VarKind::Location) {
      const auto& st = s.station(v.ref);
      a = st.setup_cost + f.months_in_mission * st.monthly_cost;
    } else if (v.kind == VarKind::Provider) {
      a = s.provider(v.ref).integration_cost;
    } else if (v.kind == VarKind::VehicleLicense) {
      a = s.station(v.ref).license_cost;
    }
    if (a != 0.0) obj.terms.emplace_back(v.index, a);
  }
  if (s.config.d_s_min) satellite_downlink_constraints(m, s, contacts, *s.config.d_s_min);
  return m;
}

/// Mission data volume under the monthly cost cap.
inline IpModel build_max_data(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  if (!s.config.e_max) throw ConfigError("max_data objective requires e_max (monthly cost cap)");
  IpModel m = detail::core_model(s, contacts);
  const auto f = scale_factors(s);
  m.objective.minimize = false;
  for (const auto& c : contacts) {
    const double a = f.mission_over_sim * detail::contact_data(c);
    if (a != 0.0) m.objective.terms.emplace_back(m.contact_var.at(c.id), a);
  }
  monthly_cost_constraint(m, s, contacts, *s.config.e_max);
  if (s.config.d_s_min) satellite_downlink_constraints(m, s, contacts, *s.config.d_s_min);
  return m;
}

/// Smallest achievable maximum gap between consecutive selected contacts of any satellite.
inline IpModel build_min_max_gap(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  if (!s.config.e_max) throw ConfigError("min_max_gap objective requires e_max (monthly cost cap)");
  if (!s.config.d_s_min) throw ConfigError("min_max_gap objective requires d_s_min");
  if (s.config.g_max_limit) throw ConfigError("g_max_limit is redundant with the min_max_gap objective");
  IpModel m = detail::core_model(s, contacts);
  detail::Builder b(m, s, contacts);
  m.gmax_var = m.add_variable(VarKind::GapMax, b.unique("Gmax"), 0.0, s.t_sim(), false);
  m.objective.minimize = true;
  m.objective.terms.emplace_back(m.gmax_var, 1.0);
  satellite_downlink_constraints(m, s, contacts, *s.config.d_s_min);
  monthly_cost_constraint(m, s, contacts, *s.config.e_max);
  gap_constraints(m, s, contacts, m.gmax_var, 0.0);
  return m;
}

/// Appends every enabled optional family that the objective builder did not already add.
inline void add_optional_constraints(IpModel& m, const Scenario& s,
                                     const std::vector<ContactWindow>& contacts) {
  const auto& cfg = s.config;
  detail::Builder b(m, s, contacts);
  if (cfg.d_min) {
    std::vector<const ContactWindow*> all;
    for (const auto& c : contacts) all.push_back(&c);
    detail::sliding_rows(b, all, *cfg.d_min, "const_dl_", "constellation_downlink", detail::contact_data);
  }
  if (cfg.d_s_min && !m.families.count("satellite_downlink"))
    satellite_downlink_constraints(m, s, contacts, *cfg.d_s_min);
  if (cfg.e_max && !m.families.count("monthly_cost_cap"))
    monthly_cost_constraint(m, s, contacts, *cfg.e_max);
  if (cfg.g_max_limit) {
    if (m.gmax_var >= 0) throw ConfigError("g_max_limit is redundant with the min_max_gap objective");
    gap_constraints(m, s, contacts, -1, *cfg.g_max_limit);
  }
  if (cfg.p_max) {
    std::vector<Term> t;
    for (const auto& p : s.providers)
      if (auto it = m.provider_var.find(p.id); it != m.provider_var.end()) t.emplace_back(it->second, 1.0);
    b.add(std::move(t), Sense::Le, *cfg.p_max, "provider_cap", "provider_cap");
  }
  if (cfg.n_min) {
    const auto by_sat = detail::group_by(contacts, [](const ContactWindow& c) { return c.satellite_id; });
    for (const auto& sat : s.satellites) {
      auto it = by_sat.find(sat.id);
      const std::vector<const ContactWindow*> none;
      detail::sliding_rows(b, it == by_sat.end() ? none : it->second, *cfg.n_min,
                           "n_contacts_" + b.sat_name(sat.id) + "_", "contacts_per_period",
                           [](const ContactWindow&) { return 1.0; });
    }
  }
  for (const auto& name : cfg.required_providers) {
    const auto it = std::find_if(s.providers.begin(), s.providers.end(),
                                 [&](const model::Provider& p) { return p.name == name; });
    if (it == s.providers.end()) throw ConfigError("required provider not in scenario: " + name);
    b.add({{m.provider_var.at(it->id), 1.0}}, Sense::Eq, 1.0, "req_p_" + detail::sanitize(name),
          "required_provider");
  }
  for (const auto& ref : cfg.required_locations) {
    std::vector<const model::StationLocation*> hits;
    for (const auto& st : s.stations) {
      const std::string full = s.provider(st.provider_id).name + "/" + st.name;
      if (full == ref || st.name == ref) hits.push_back(&st);
    }
    if (hits.size() > 1) {
      std::vector<const model::StationLocation*> exact;
      for (const auto* st : hits)
        if (s.provider(st->provider_id).name + "/" + st->name == ref) exact.push_back(st);
      hits = exact;
    }
    if (hits.empty()) throw ConfigError("required location not in scenario: " + ref);
    if (hits.size() > 1) throw ConfigError("ambiguous required location (use Provider/Location): " + ref);
    b.add({{m.location_var.at(hits[0]->id), 1.0}}, Sense::Eq, 1.0, "req_l_" + b.station_name(hits[0]->id),
          "required_location");
  }
  if (cfg.m_min || cfg.m_max) {
    std::vector<Term> t;
    for (const auto& st : s.stations) t.emplace_back(m.location_var.at(st.id), 1.0);
    if (cfg.m_min) b.add(t, Sense::Ge, *cfg.m_min, "locations_min", "location_count_min");
    if (cfg.m_max) b.add(t, Sense::Le, *cfg.m_max, "locations_max", "location_count_max");
  }
}

/// Objective builder for the configured objective plus all enabled optional families.
inline IpModel build_model(const Scenario& s, const std::vector<ContactWindow>& contacts) {
  IpModel m;
  switch (s.config.objective) {
    case model::Objective::MinCost: m = build_min_cost(s, contacts); break;
    case model::Objective::MaxData: m = build_max_data(s, contacts); break;
    case model::Objective::MinMaxGap: m = build_min_max_gap(s, contacts); break;
  }
  add_optional_constraints(m, s, contacts);
  return m;
}

}  // namespace gsopt::formulation
