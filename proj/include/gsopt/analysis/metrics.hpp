#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "gsopt/contacts/finder.hpp"
#include "gsopt/formulation/builders.hpp"
#include "gsopt/model/types.hpp"
#include "gsopt/solver/branch_and_bound.hpp"

namespace gsopt::analysis {

using contacts::ContactWindow;
using model::Scenario;
using solver::MissionMetrics;

/// Mission metrics recomputed from the selected sets and the scenario constants. Licenses are
/// charged for every satellite-location pair with a selected contact.
inline MissionMetrics compute_metrics(const Scenario& s, const std::vector<ContactWindow>& contacts,
                                      const std::vector<int>& selected_contacts,
                                      const std::vector<int>& selected_locations,
                                      const std::vector<int>& selected_providers) {
  const auto f = formulation::scale_factors(s);
  const std::set<int> chosen(selected_contacts.begin(), selected_contacts.end());
  MissionMetrics out;
  long double cost = 0.0L, data = 0.0L, monthly = 0.0L;
  for (int p : selected_providers) cost += s.provider(p).integration_cost;
  for (int l : selected_locations) {
    const auto& st = s.station(l);
    cost += st.setup_cost + f.months_in_mission * st.monthly_cost;
    monthly += st.monthly_cost;
  }
  std::set<std::pair<int, int>> licenses;
  std::map<int, std::vector<const ContactWindow*>> by_sat;
  for (const auto& c : contacts) {
    if (!chosen.count(c.id)) continue;
    const auto& st = s.station(c.station_id);
    const double pass = st.contact_cost(c.duration);
    cost += f.mission_over_sim * pass;
    monthly += f.per_month_from_sim * pass;
    data += f.mission_over_sim * c.data_rate * c.duration;
    licenses.insert({c.satellite_id, c.station_id});
    by_sat[c.satellite_id].push_back(&c);
  }
  for (const auto& [sat, st] : licenses) cost += s.station(st).license_cost;
  out.total_mission_cost = static_cast<double>(cost);
  out.total_data_downlink = static_cast<double>(data);
  out.monthly_operational_cost = static_cast<double>(monthly);
  out.contacts_per_day = static_cast<double>(chosen.size()) / (s.t_sim() / 86400.0);

  const double t0 = s.t_sim_start.seconds_since_j2000();
  const double t1 = s.t_sim_end.seconds_since_j2000();
  out.max_gap = 0.0;
  for (const auto& sat : s.satellites) {
    auto& list = by_sat[sat.id];
    std::sort(list.begin(), list.end(), [](const ContactWindow* a, const ContactWindow* b) {
      return a->start < b->start || (a->start == b->start && a->id < b->id);
    });
    double interior = 0.0, boundary = s.t_sim();
    if (!list.empty()) {
      for (std::size_t k = 1; k < list.size(); ++k)
        interior = std::max(interior, list[k]->start - list[k - 1]->end);
      boundary = std::max(list.front()->start.seconds_since_j2000() - t0,
                          t1 - list.back()->end.seconds_since_j2000());
      boundary = std::max(boundary, 0.0);
    }
    out.max_gap_per_satellite[sat.id] = interior;
    out.boundary_gap_per_satellite[sat.id] = boundary;
    out.max_gap = std::max(out.max_gap, s.config.count_boundary_gaps ? std::max(interior, boundary) : interior);
  }
  return out;
}

inline MissionMetrics compute_metrics(const Scenario& s, const std::vector<ContactWindow>& contacts,
                                      const solver::Solution& sol) {
  return compute_metrics(s, contacts, sol.selected_contacts, sol.selected_locations, sol.selected_providers);
}

/// Full assignment for `m` that selects the given contacts, locations and providers. Licenses
/// and successor pairs follow from the contacts; continuous variables are left at zero for the
/// solver to polish.
inline std::vector<double> lift_selection(const formulation::IpModel& m,
                                          const std::vector<ContactWindow>& contacts,
                                          const std::vector<int>& selected_contacts,
                                          const std::vector<int>& selected_locations,
                                          const std::vector<int>& selected_providers) {
  using formulation::VarKind;
  std::vector<double> x(m.variables.size(), 0.0);
  std::set<std::pair<int, int>> pairs;
  std::unordered_map<int, const ContactWindow*> by_id;
  for (const auto& c : contacts) by_id[c.id] = &c;
  std::map<int, std::vector<const ContactWindow*>> by_sat;
  for (int id : selected_contacts) {
    auto it = m.contact_var.find(id);
    auto ct = by_id.find(id);
    if (it == m.contact_var.end() || ct == by_id.end()) continue;
    x[it->second] = 1.0;
    pairs.insert({ct->second->satellite_id, ct->second->station_id});
    by_sat[ct->second->satellite_id].push_back(ct->second);
  }
  for (int id : selected_locations)
    if (auto it = m.location_var.find(id); it != m.location_var.end()) x[it->second] = 1.0;
  for (int id : selected_providers)
    if (auto it = m.provider_var.find(id); it != m.provider_var.end()) x[it->second] = 1.0;
  for (const auto& v : m.variables)
    if (v.kind == VarKind::VehicleLicense && pairs.count({v.ref2, v.ref})) x[v.index] = 1.0;

  // Successor pairs: the successor contact of y is read off its gap_succ_link row.
  std::unordered_map<int, int> succ_of;  // y -> successor contact id
  std::unordered_map<int, int> var_contact;
  for (const auto& v : m.variables)
    if (v.kind == VarKind::Contact) var_contact[v.index] = v.ref;
  for (const auto& row : m.constraints) {
    if (row.family != "gap_succ_link" || row.terms.size() != 2) continue;
    succ_of[row.terms[0].first] = var_contact.at(row.terms[1].first);
  }
  std::map<int, std::unordered_map<int, int>> next;  // sat -> (contact id or -1) -> next id or -1
  for (auto& [sat, list] : by_sat) {
    std::sort(list.begin(), list.end(), [](const ContactWindow* a, const ContactWindow* b) {
      return a->start < b->start || (a->start == b->start && a->id < b->id);
    });
    auto& nx = next[sat];
    nx[-1] = list.front()->id;
    for (std::size_t k = 0; k < list.size(); ++k)
      nx[list[k]->id] = k + 1 < list.size() ? list[k + 1]->id : -1;
  }
  for (const auto& v : m.variables) {
    if (v.kind != VarKind::GapSuccessor) continue;
    auto sat = next.find(v.ref2);
    const auto succ = succ_of.find(v.index);
    const int to = succ == succ_of.end() ? -1 : succ->second;
    if (sat == next.end()) {
      // No selected contact: only the start-to-end event is active.
      if (v.ref == -1 && to == -1) x[v.index] = 1.0;
      continue;
    }
    auto it = sat->second.find(v.ref);
    if (it != sat->second.end() && it->second == to) x[v.index] = 1.0;
  }
  return x;
}

inline std::vector<double> lift_selection(const formulation::IpModel& m,
                                          const std::vector<ContactWindow>& contacts,
                                          const solver::Solution& sol) {
  return lift_selection(m, contacts, sol.selected_contacts, sol.selected_locations, sol.selected_providers);
}

}  // namespace gsopt::analysis
