#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "gsopt/contacts/finder.hpp"
#include "gsopt/model/dataset.hpp"
#include "gsopt/model/random.hpp"

namespace gsopt::analysis {

struct WindowStats {
  int window_days = 0;
  double mean_gap = 0.0;               // s
  double mean_contact_duration = 0.0;  // s
  double mean_contacts_per_day = 0.0;
  int sample_size = 0;
  int gap_sample_size = 0;  // satellites with at least two contacts
};

inline const std::vector<int>& default_window_days() {
  static const std::vector<int> d = {1, 2, 3, 5, 7, 10, 20, 30, 50, 60, 90, 100, 180};
  return d;
}

/// Per-satellite statistics over contacts merged across all stations, averaged over the sample.
inline WindowStats window_stats(int days, int sample_size, const std::vector<contacts::ContactWindow>& clipped) {
  WindowStats w;
  w.window_days = days;
  w.sample_size = sample_size;
  std::map<int, std::vector<const contacts::ContactWindow*>> by_sat;
  for (const auto& c : clipped) by_sat[c.satellite_id].push_back(&c);
  double gap_sum = 0.0, dur_sum = 0.0, rate_sum = 0.0;
  int dur_n = 0;
  for (auto& [sat, list] : by_sat) {
    std::sort(list.begin(), list.end(), [](const auto* a, const auto* b) {
      return a->start < b->start || (a->start == b->start && a->id < b->id);
    });
    double d = 0.0;
    for (const auto* c : list) d += c->duration;
    dur_sum += d / static_cast<double>(list.size());
    ++dur_n;
    rate_sum += static_cast<double>(list.size()) / days;
    if (list.size() < 2) continue;
    double g = 0.0;
    for (std::size_t k = 1; k < list.size(); ++k) g += std::max(0.0, list[k]->start - list[k - 1]->end);
    gap_sum += g / static_cast<double>(list.size() - 1);
    ++w.gap_sample_size;
  }
  if (w.gap_sample_size > 0) w.mean_gap = gap_sum / w.gap_sample_size;
  if (dur_n > 0) w.mean_contact_duration = dur_sum / dur_n;
  if (sample_size > 0) w.mean_contacts_per_day = rate_sum / sample_size;
  return w;
}

/// Samples `sample` catalog objects in the 300-1000 km band, computes their contacts once over
/// the longest window and reports statistics for each window length (ascending) starting at `start`.
inline std::vector<WindowStats> window_stability_study(const std::vector<astro::TleRecord>& catalog,
                                                       const std::vector<model::StationLocation>& stations,
                                                       std::vector<int> durations, std::size_t sample,
                                                       std::uint64_t seed, astro::EpochUtc start,
                                                       const contacts::ContactOptions& opt = {}) {
  if (durations.empty()) throw model::ConfigError("window study needs at least one duration");
  if (sample == 0) throw model::ConfigError("window study sample must be positive");
  for (int d : durations)
    if (d <= 0) throw model::ConfigError("window durations must be positive days");
  std::sort(durations.begin(), durations.end());
  durations.erase(std::unique(durations.begin(), durations.end()), durations.end());
  std::vector<astro::TleRecord> picked;
  for (auto i : model::sample_catalog(catalog, sample, seed)) picked.push_back(catalog[i]);
  const auto sats = model::satellites_from_catalog(picked);
  const auto all = contacts::find_contacts(sats, stations, start, start + durations.back() * 86400.0, opt).contacts;
  std::vector<WindowStats> out;
  for (int d : durations)
    out.push_back(window_stats(d, static_cast<int>(sample), contacts::clip_contacts(all, start, start + d * 86400.0)));
  return out;
}

}  // namespace gsopt::analysis
