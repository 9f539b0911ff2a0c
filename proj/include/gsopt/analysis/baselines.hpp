#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gsopt/analysis/metrics.hpp"

namespace gsopt::analysis {

struct BaselineResult {
  std::vector<int> provider_subset;  // provider ids, ascending
  solver::Solution solution;
  std::optional<double> objective;   // absent when no feasible assignment was found
  std::optional<double> normalized_objective;
};

struct BaselineSummary {
  int k = 0;
  std::vector<BaselineResult> results;  // subsets in lexicographic order
  std::optional<std::size_t> best;      // index of the best objective
  bool all_infeasible = true;
};

/// Keeps only stations of the given providers and the contacts they serve.
inline std::pair<Scenario, std::vector<ContactWindow>> restrict_to_providers(
    const Scenario& s, const std::vector<ContactWindow>& contacts, const std::vector<int>& subset) {
  const std::set<int> keep(subset.begin(), subset.end());
  Scenario r = s;
  r.providers.clear();
  r.stations.clear();
  for (const auto& p : s.providers)
    if (keep.count(p.id)) r.providers.push_back(p);
  for (const auto& st : s.stations)
    if (keep.count(st.provider_id)) r.stations.push_back(st);
  std::vector<ContactWindow> cs;
  for (const auto& c : contacts)
    if (keep.count(c.provider_id)) cs.push_back(c);
  // Requirements naming removed providers or locations no longer apply.
  auto& cfg = r.config;
  std::erase_if(cfg.required_providers, [&](const std::string& n) {
    return std::none_of(r.providers.begin(), r.providers.end(), [&](const model::Provider& p) { return p.name == n; });
  });
  std::erase_if(cfg.required_locations, [&](const std::string& ref) {
    return std::none_of(r.stations.begin(), r.stations.end(), [&](const model::StationLocation& st) {
      return st.name == ref || r.provider(st.provider_id).name + "/" + st.name == ref;
    });
  });
  return {std::move(r), std::move(cs)};
}

/// Provider subsets of size k in lexicographic order of ids.
inline std::vector<std::vector<int>> provider_subsets(const Scenario& s, int k) {
  std::vector<int> ids;
  for (const auto& p : s.providers) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(ids.size());
  if (k < 1 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    std::vector<int> sub;
    for (int i : idx) sub.push_back(ids[i]);
    out.push_back(std::move(sub));
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

inline bool better(bool minimize, double a, double b) { return minimize ? a < b : a > b; }

/// Subset value over full-IP value; 1 when both are zero, absent when only the full value is.
inline std::optional<double> normalize(double subset, double full) {
  if (full == 0.0) return subset == 0.0 ? std::optional<double>(1.0) : std::nullopt;
  return subset / full;
}

/// Solves the configured objective restricted to every k-provider subset. Feasible solutions in
/// `seeds` whose providers fit inside a subset are offered as starting assignments.
inline BaselineSummary run_baselines(const Scenario& s, const std::vector<ContactWindow>& contacts, int k,
                                     const solver::SolveOptions& options = {},
                                     const std::vector<BaselineResult>& seeds = {},
                                     std::optional<double> full_objective = std::nullopt) {
  if (k != 1 && k != 2) throw model::ConfigError("baseline subset size must be 1 or 2");
  BaselineSummary out;
  out.k = k;
  const bool minimize = s.config.objective != model::Objective::MaxData;
  for (const auto& subset : provider_subsets(s, k)) {
    auto [rs, rc] = restrict_to_providers(s, contacts, subset);
    BaselineResult r;
    r.provider_subset = subset;
    const auto m = formulation::build_model(rs, rc);
    auto opt = options;
    for (const auto& seed : seeds) {
      if (!seed.solution.has_incumbent()) continue;
      if (!std::includes(subset.begin(), subset.end(), seed.provider_subset.begin(), seed.provider_subset.end()))
        continue;
      opt.starts.push_back(lift_selection(m, rc, seed.solution));
    }
    r.solution = solver::solve(m, opt);
    if (r.solution.has_incumbent()) {
      r.solution.metrics = compute_metrics(rs, rc, r.solution);
      r.objective = r.solution.certificate.objective;
      if (full_objective) r.normalized_objective = normalize(*r.objective, *full_objective);
      out.all_infeasible = false;
      if (!out.best || better(minimize, *r.objective, *out.results[*out.best].objective))
        out.best = out.results.size();
    }
    out.results.push_back(std::move(r));
  }
  return out;
}

/// Fills normalized objectives once the full-IP value is known.
inline void apply_normalization(BaselineSummary& summary, double full_objective) {
  for (auto& r : summary.results)
    if (r.objective) r.normalized_objective = normalize(*r.objective, full_objective);
}

struct ProviderStudy {
  BaselineSummary one, two;
  BaselineResult full;
};

/// One-provider and two-provider baselines followed by the full problem, each level started
/// from the solutions of the level below, then normalized against the full problem.
inline ProviderStudy provider_study(const Scenario& s, const std::vector<ContactWindow>& contacts,
                                    const solver::SolveOptions& subset_options = {},
                                    const solver::SolveOptions& full_options = {}) {
  ProviderStudy st;
  st.one = run_baselines(s, contacts, 1, subset_options);
  st.two = run_baselines(s, contacts, 2, subset_options, st.one.results);
  const auto m = formulation::build_model(s, contacts);
  auto opt = full_options;
  for (const auto* level : {&st.one, &st.two})
    for (const auto& r : level->results)
      if (r.solution.has_incumbent()) opt.starts.push_back(lift_selection(m, contacts, r.solution));
  for (const auto& p : s.providers) st.full.provider_subset.push_back(p.id);
  std::sort(st.full.provider_subset.begin(), st.full.provider_subset.end());
  st.full.solution = solver::solve(m, opt);
  if (st.full.solution.has_incumbent()) {
    st.full.solution.metrics = compute_metrics(s, contacts, st.full.solution);
    st.full.objective = st.full.solution.certificate.objective;
    st.full.normalized_objective = 1.0;
    apply_normalization(st.one, *st.full.objective);
    apply_normalization(st.two, *st.full.objective);
  }
  return st;
}

}  // namespace gsopt::analysis
