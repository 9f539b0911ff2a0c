#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "gsopt/formulation/model.hpp"
#include "gsopt/solver/audit.hpp"
#include "gsopt/solver/lp.hpp"

namespace gsopt::solver {

using formulation::VarKind;

enum class Status { Optimal, FeasibleWithGap, Infeasible, Unbounded, LimitReached };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "Optimal";
    case Status::FeasibleWithGap: return "FeasibleWithGap";
    case Status::Infeasible: return "Infeasible";
    case Status::Unbounded: return "Unbounded";
    case Status::LimitReached: return "LimitReached";
  }
  return "?";
}

struct Limits {
  double time_s = 600.0;
  long nodes = 1000000;
  double rel_gap = 1e-6;
};

struct Certificate {
  Status status = Status::Infeasible;
  std::optional<double> objective;  // incumbent, in the model's own sense
  std::optional<double> best_bound; // proven bound, in the model's own sense
  double rel_gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  long cuts = 0;
  bool horizon_truncated = false;
  double wall_time = 0.0;
  std::string message;
};

struct MissionMetrics {
  double total_mission_cost = 0.0;
  double total_data_downlink = 0.0;
  std::map<int, double> max_gap_per_satellite;       // s, between selected contacts
  std::map<int, double> boundary_gap_per_satellite;  // s, to the simulation-window edges
  double max_gap = 0.0;
  double monthly_operational_cost = 0.0;
  double contacts_per_day = 0.0;
};

struct Solution {
  std::vector<double> assignment;
  Certificate certificate;
  std::vector<int> selected_contacts;
  std::vector<int> selected_locations;
  std::vector<int> selected_providers;
  std::optional<MissionMetrics> metrics;

  [[nodiscard]] bool has_incumbent() const { return certificate.objective.has_value(); }
};

struct SolveOptions {
  Limits limits;
  std::vector<std::vector<double>> starts;  // candidate assignments tried before the search
  bool strengthen = true;                   // implied-bound and clique rows in the relaxation
  int heuristic_frequency = 50;             // diving every this many nodes
};

namespace detail {

inline constexpr double kIntTol = 1e-6;

inline double fractionality(double v) { return std::abs(v - std::round(v)); }

class BranchAndBound {
 public:
  BranchAndBound(const IpModel& m, const SolveOptions& opt)
      : m_(m), opt_(opt), n_(static_cast<int>(m.variables.size())),
        start_(std::chrono::steady_clock::now()) {
    deadline_ = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(std::max(0.0, opt.limits.time_s)));
    sign_ = m.objective.minimize ? 1.0 : -1.0;
  }

  Solution run() {
    Solution sol;
    m_.check_well_formed();
    cert_.horizon_truncated = m_.successor_horizon_truncated;
    build_lp();
    if (trivially_infeasible_) {
      finish(sol, Status::Infeasible, "empty row with unsatisfiable bounds");
      return sol;
    }
    for (const auto& s : opt_.starts) try_candidate(s);

    // Root relaxation with cut rounds.
    LpStatus st = solve_lp();
    if (st == LpStatus::TimeLimit || st == LpStatus::IterationLimit)
      return limit(sol, "limit reached during root relaxation");
    if (st == LpStatus::Infeasible) {
      finish(sol, incumbent_ ? Status::Optimal : Status::Infeasible, "root relaxation infeasible");
      return sol;
    }
    if (opt_.strengthen) {
      for (int round = 0; round < 50 && st == LpStatus::Optimal; ++round) {
        if (add_cuts(lp_->primal()) == 0) break;
        st = solve_lp();
      }
      if (st == LpStatus::TimeLimit || st == LpStatus::IterationLimit)
        return limit(sol, "limit reached during root cut rounds");
      if (st == LpStatus::Infeasible) {
        finish(sol, incumbent_ ? Status::Optimal : Status::Infeasible, "root relaxation infeasible");
        return sol;
      }
    }
    const double root_bound = st == LpStatus::Cutoff ? cutoff() : lp_->dual_bound();
    root_basis_ = lp_->basis();
    if (st == LpStatus::Optimal) {
      heuristics(lp_->primal());
      apply_fixes({});
    }

    struct Node {
      double bound;
      long id;
      std::vector<std::pair<int, int>> fixes;  // (variable, value)
      std::vector<std::uint8_t> basis;
    };
    auto cmp = [](const Node& a, const Node& b) {
      return a.bound > b.bound || (a.bound == b.bound && a.id > b.id);
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
    long next_id = 0;
    open.push({root_bound, next_id++, {}, root_basis_});

    while (!open.empty()) {
      best_open_ = open.top().bound;
      if (incumbent_ && prunable(best_open_)) break;
      if (std::chrono::steady_clock::now() > deadline_) return limit(sol, "time limit");
      if (cert_.nodes >= opt_.limits.nodes) return limit(sol, "node limit");
      Node node = open.top();
      open.pop();
      ++cert_.nodes;

      apply_fixes(node.fixes);
      lp_->set_basis(node.basis);
      st = solve_lp();
      if (st == LpStatus::TimeLimit || st == LpStatus::IterationLimit) {
        open.push(node);
        return limit(sol, st == LpStatus::TimeLimit ? "time limit" : "LP iteration limit");
      }
      if (st != LpStatus::Optimal) continue;
      double bound = std::max(node.bound, lp_->dual_bound());
      if (incumbent_ && prunable(bound)) continue;
      auto x = lp_->primal();
      if (opt_.strengthen && node.fixes.size() <= 8 && add_cuts(x) > 0) {
        st = solve_lp();
        if (st == LpStatus::Infeasible || st == LpStatus::Cutoff) continue;
        if (st == LpStatus::TimeLimit || st == LpStatus::IterationLimit) {
          open.push(node);
          return limit(sol, st == LpStatus::TimeLimit ? "time limit" : "LP iteration limit");
        }
        bound = std::max(bound, lp_->dual_bound());
        if (incumbent_ && prunable(bound)) continue;
        x = lp_->primal();
      }
      const int branch = pick_branch(x);
      if (branch < 0) {
        try_candidate(x);
        continue;
      }
      if (opt_.heuristic_frequency > 0 && cert_.nodes % opt_.heuristic_frequency == 0) {
        const auto basis = lp_->basis();
        heuristics(x);
        apply_fixes(node.fixes);
        lp_->set_basis(basis);
      }
      const auto basis = lp_->basis();
      for (int val : {0, 1}) {
        Node child{bound, next_id++, node.fixes, basis};
        child.fixes.emplace_back(branch, val);
        open.push(std::move(child));
      }
    }
    best_open_ = open.empty() ? kInf : open.top().bound;
    if (!incumbent_) {
      finish(sol, Status::Infeasible, "search tree exhausted without a feasible assignment");
      return sol;
    }
    const double gap = gap_of(best_open_);
    finish(sol, gap <= 1e-6 ? Status::Optimal : Status::FeasibleWithGap,
           gap <= 1e-6 ? "optimal within relative gap 1e-6" : "terminated at requested relative gap");
    return sol;
  }

 private:
  const IpModel& m_;
  SolveOptions opt_;
  int n_;
  std::chrono::steady_clock::time_point start_, deadline_;
  double sign_ = 1.0;
  std::unique_ptr<DualSimplex> lp_;
  std::vector<double> root_lo_, root_hi_;
  std::vector<int> changed_;
  bool trivially_infeasible_ = false;
  std::vector<std::uint8_t> root_basis_;
  Certificate cert_;
  bool incumbent_ = false;
  double inc_obj_ = kInf;  // internal minimization sense, including the constant
  std::vector<double> inc_x_;
  double best_open_ = -kInf;

  // Strengthening data.
  std::vector<std::pair<int, int>> implied_;  // (x, z): x <= z
  std::vector<std::vector<int>> conflicts_;   // adjacency over binaries
  std::unordered_set<long long> conflict_set_;
  std::set<std::vector<int>> clique_pool_;
  std::set<std::pair<int, int>> implied_pool_;
  std::map<std::string, std::map<int, int>> zmap_;  // family -> (x -> z) for x <= z rows
  std::vector<std::pair<std::vector<std::pair<int, double>>, double>> covers_, projections_;
  std::vector<bool> projection_used_;
  // Column view for continuous polishing.
  std::vector<std::vector<std::pair<int, double>>> col_rows_;

  double constant_internal() const { return sign_ * m_.objective.constant; }

  void build_lp() {
    std::vector<double> c(n_, 0.0), lo(n_), hi(n_);
    for (const auto& [j, a] : m_.objective.terms) c[j] += sign_ * a;
    for (int j = 0; j < n_; ++j) {
      lo[j] = m_.variables[j].lo;
      hi[j] = m_.variables[j].hi;
    }
    root_lo_ = lo;
    root_hi_ = hi;
    lp_ = std::make_unique<DualSimplex>(c, lo, hi);
    col_rows_.assign(n_, {});
    conflicts_.assign(n_, {});
    for (std::size_t i = 0; i < m_.constraints.size(); ++i) {
      const auto& row = m_.constraints[i];
      for (const auto& [j, a] : row.terms) col_rows_[j].emplace_back(static_cast<int>(i), a);
      double rlo = -kInf, rhi = kInf;
      if (row.sense == Sense::Le || row.sense == Sense::Eq) rhi = row.rhs;
      if (row.sense == Sense::Ge || row.sense == Sense::Eq) rlo = row.rhs;
      bool empty = true;
      for (const auto& t : row.terms) empty = empty && t.second == 0.0;
      if (empty) {
        if (rlo > 1e-9 || rhi < -1e-9) trivially_infeasible_ = true;
        continue;
      }
      if (opt_.strengthen && row.sense != Sense::Eq) {
        auto t = tightened(row);
        if (row.sense == Sense::Ge) covers_.push_back({t, row.rhs});
        lp_->add_row(t, rlo, rhi);
      } else {
        lp_->add_row(row.terms, rlo, rhi);
      }
      classify_row(row);
    }
    if (opt_.strengthen) build_projections();
  }

  // A covering row over binaries whose every variable sits under a linking variable of one
  // family projects onto those linking variables: sum_g min(b, sum_{i in g} a_i) z_g >= b.
  void build_projections() {
    // Chains x <= z <= w compose into x <= w.
    std::map<std::string, std::map<int, int>> composed;
    for (const auto& [f1, m1] : zmap_)
      for (const auto& [f2, m2] : zmap_) {
        if (f1 == f2) continue;
        std::map<int, int> comp;
        for (const auto& [x, z] : m1)
          if (auto it = m2.find(z); it != m2.end()) comp.emplace(x, it->second);
        if (!comp.empty()) composed[f1 + ">" + f2] = std::move(comp);
      }
    zmap_.insert(composed.begin(), composed.end());
    std::set<std::vector<std::pair<int, double>>> seen;
    for (const auto& [terms, b] : covers_) {
      if (!(b > 0.0)) continue;
      bool pure = true;
      for (const auto& [j, a] : terms) pure = pure && a >= 0.0 && is_binary(j);
      if (!pure) continue;
      for (const auto& [fam, zmap] : zmap_) {
        std::map<int, double> agg;
        bool all = true;
        for (const auto& [j, a] : terms) {
          if (a == 0.0) continue;
          auto it = zmap.find(j);
          if (it == zmap.end()) {
            all = false;
            break;
          }
          agg[it->second] += a;
        }
        if (!all || agg.empty()) continue;
        std::vector<std::pair<int, double>> cut;
        for (const auto& [z, a] : agg) cut.emplace_back(z, std::min(a, b));
        if (seen.insert(cut).second) projections_.push_back({std::move(cut), b});
      }
    }
  }

  // Coefficient tightening on binaries: in the >= orientation a_j may drop to
  // b - minact(rest), since the row is slack whenever x_j = 1. Integer points are unchanged.
  std::vector<formulation::Term> tightened(const formulation::LinearConstraint& row) const {
    const double s = row.sense == Sense::Ge ? 1.0 : -1.0;
    const double b = s * row.rhs;
    long double minact = 0.0L;
    for (const auto& [j, a0] : row.terms) {
      const double a = s * a0;
      const double bnd = a > 0 ? root_lo_[j] : root_hi_[j];
      if (!std::isfinite(bnd)) return row.terms;
      minact += static_cast<long double>(a) * bnd;
    }
    auto out = row.terms;
    for (auto& [j, a0] : out) {
      const double a = s * a0;
      if (!(a > 0.0) || !is_binary(j) || root_lo_[j] != 0.0 || root_hi_[j] != 1.0) continue;
      const double cap = static_cast<double>(b - minact);
      if (cap < a * (1.0 - 1e-9)) a0 = s * std::max(cap, 0.0);
    }
    return out;
  }

  bool is_binary(int j) const { return m_.variables[j].binary; }

  void classify_row(const formulation::LinearConstraint& row) {
    if (row.sense != Sense::Le) return;
    if (row.terms.size() == 2 && row.rhs == 1.0 && row.terms[0].second == 1.0 &&
        row.terms[1].second == 1.0 && is_binary(row.terms[0].first) && is_binary(row.terms[1].first)) {
      const int a = row.terms[0].first, b = row.terms[1].first;
      if (conflict_set_.insert(key(a, b)).second) {
        conflicts_[a].push_back(b);
        conflicts_[b].push_back(a);
      }
      return;
    }
    if (row.rhs != 0.0 || row.terms.size() < 3) return;
    int z = -1;
    for (const auto& [j, a] : row.terms) {
      if (!is_binary(j)) return;
      if (a < 0.0) {
        if (z >= 0) return;
        z = j;
      } else if (a != 1.0) {
        return;
      }
    }
    if (z < 0) return;
    for (const auto& [j, a] : row.terms) {
      if (j == z) continue;
      implied_.emplace_back(j, z);
      zmap_[row.family].emplace(j, z);
    }
  }

  long long key(int a, int b) const {
    if (a > b) std::swap(a, b);
    return static_cast<long long>(a) * n_ + b;
  }

  bool adjacent(int a, int b) const { return conflict_set_.count(key(a, b)) > 0; }

  int add_cuts(const std::vector<double>& x) {
    int added = 0;
    // Implied bounds x <= z.
    std::vector<std::pair<double, std::pair<int, int>>> viol;
    for (const auto& [a, z] : implied_)
      if (x[a] - x[z] > 1e-6 && !implied_pool_.count({a, z})) viol.push_back({x[a] - x[z], {a, z}});
    std::sort(viol.begin(), viol.end(), [](const auto& p, const auto& q) {
      return p.first > q.first || (p.first == q.first && p.second < q.second);
    });
    if (viol.size() > 2000) viol.resize(2000);
    for (const auto& [v, pr] : viol) {
      implied_pool_.insert(pr);
      lp_->add_row({{pr.first, 1.0}, {pr.second, -1.0}}, -kInf, 0.0);
      ++added;
    }
    projection_used_.resize(projections_.size(), false);
    for (std::size_t k = 0; k < projections_.size(); ++k) {
      if (projection_used_[k]) continue;
      const auto& [t, b] = projections_[k];
      long double act = 0.0L;
      for (const auto& [j, a] : t) act += static_cast<long double>(a) * x[j];
      if (act >= b * (1.0 - 1e-6)) continue;
      projection_used_[k] = true;
      lp_->add_row(t, b, kInf);
      ++added;
    }
    // Cliques in the conflict graph, grown greedily from fractional seeds.
    std::vector<int> support;
    for (int j = 0; j < n_; ++j)
      if (!conflicts_[j].empty() && x[j] > 1e-6) support.push_back(j);
    std::sort(support.begin(), support.end(), [&](int a, int b) { return x[a] > x[b] || (x[a] == x[b] && a < b); });
    int clique_cuts = 0;
    for (int seed : support) {
      if (x[seed] >= 1.0 - 1e-6) continue;
      std::vector<int> nb = conflicts_[seed];
      std::sort(nb.begin(), nb.end(), [&](int a, int b) { return x[a] > x[b] || (x[a] == x[b] && a < b); });
      std::vector<int> clique{seed};
      double sum = x[seed];
      for (int u : nb) {
        bool ok = true;
        for (int w : clique)
          if (w != u && !adjacent(u, w)) {
            ok = false;
            break;
          }
        if (ok) {
          clique.push_back(u);
          sum += x[u];
        }
      }
      if (sum <= 1.0 + 1e-6 || clique.size() < 3) continue;
      std::sort(clique.begin(), clique.end());
      if (!clique_pool_.insert(clique).second) continue;
      std::vector<std::pair<int, double>> t;
      for (int j : clique) t.emplace_back(j, 1.0);
      lp_->add_row(t, -kInf, 1.0);
      ++added;
      if (++clique_cuts >= 500) break;
    }
    cert_.cuts += added;
    return added;
  }

  double cutoff() const {
    if (!incumbent_) return kInf;
    return inc_obj_ - constant_internal() - abs_tol(inc_obj_);
  }

  double abs_tol(double ref) const { return std::max(opt_.limits.rel_gap, 1e-6) * std::max(1.0, std::abs(ref)); }

  // Node bounds (LP sense, without the constant) that cannot improve the incumbent.
  bool prunable(double lp_bound) const {
    return lp_bound + constant_internal() >= inc_obj_ - abs_tol(inc_obj_);
  }

  double gap_of(double lp_bound) const {
    const double b = std::min(lp_bound + constant_internal(), inc_obj_);
    return (inc_obj_ - b) / std::max(1.0, std::abs(inc_obj_));
  }

  LpStatus solve_lp() {
    LpControl ctrl;
    ctrl.deadline = deadline_;
    ctrl.cutoff = cutoff();
    const long before = lp_->iterations();
    LpStatus st;
    try {
      st = lp_->solve(ctrl);
    } catch (const NumericalError&) {
      lp_->reset_basis();
      st = lp_->solve(ctrl);
    }
    cert_.lp_iterations += lp_->iterations() - before;
    return st;
  }

  void apply_fixes(const std::vector<std::pair<int, int>>& fixes) {
    for (int j : changed_) lp_->set_col_bounds(j, root_lo_[j], root_hi_[j]);
    changed_.clear();
    for (const auto& [j, v] : fixes) {
      lp_->set_col_bounds(j, v, v);
      changed_.push_back(j);
    }
  }

  int pick_branch(const std::vector<double>& x) const {
    int best = -1;
    double best_frac = kIntTol;
    for (int j = 0; j < n_; ++j) {
      if (!is_binary(j)) continue;
      const double f = fractionality(x[j]);
      if (f > best_frac + 1e-12) {
        best_frac = f;
        best = j;
      }
    }
    return best;
  }

  // Moves each continuous variable to its best value inside the interval left open by the rows.
  void polish_continuous(std::vector<double>& x) const {
    for (int j = 0; j < n_; ++j) {
      const auto& v = m_.variables[j];
      if (v.binary) continue;
      long double lo = v.lo, hi = v.hi;
      for (const auto& [i, a] : col_rows_[j]) {
        const auto& row = m_.constraints[i];
        long double rest = 0.0L;
        for (const auto& [k, b] : row.terms)
          if (k != j) rest += static_cast<long double>(b) * x[k];
        const long double lim = (static_cast<long double>(row.rhs) - rest) / a;
        const bool le = row.sense == Sense::Le, ge = row.sense == Sense::Ge;
        if (row.sense == Sense::Eq) {
          lo = std::max(lo, lim);
          hi = std::min(hi, lim);
        } else if ((le && a > 0) || (ge && a < 0)) {
          hi = std::min(hi, lim);
        } else {
          lo = std::max(lo, lim);
        }
      }
      if (lo > hi) continue;
      double c = 0.0;
      for (const auto& [k, a] : m_.objective.terms)
        if (k == j) c += sign_ * a;
      double val;
      if (c > 0) val = static_cast<double>(lo);
      else if (c < 0) val = static_cast<double>(hi);
      else val = std::clamp(x[j], static_cast<double>(lo), static_cast<double>(hi));
      // Round toward the interior so the double value still satisfies every row.
      if (static_cast<long double>(val) < lo) val = std::nextafter(val, kInf);
      if (static_cast<long double>(val) > hi) val = std::nextafter(val, -kInf);
      x[j] = val;
    }
  }

  bool try_candidate(std::vector<double> x) {
    if (static_cast<int>(x.size()) != n_) return false;
    for (int j = 0; j < n_; ++j)
      if (is_binary(j)) x[j] = std::round(x[j]) == 0.0 ? 0.0 : (std::round(x[j]) >= 1.0 ? 1.0 : 0.0);
    polish_continuous(x);
    if (!audit(m_, x).empty()) return false;
    const double obj = sign_ * m_.evaluate_objective(x);
    if (incumbent_ && !(obj < inc_obj_)) return false;
    incumbent_ = true;
    inc_obj_ = obj;
    inc_x_ = std::move(x);
    return true;
  }

  // Simple rounding, then a fractional dive with one backtrack per step.
  void heuristics(const std::vector<double>& x0) {
    if (std::chrono::steady_clock::now() > deadline_) return;
    try_candidate(x0);
    {
      auto up = x0;
      for (int j = 0; j < n_; ++j)
        if (is_binary(j) && x0[j] > 1e-6) up[j] = 1.0;
      try_candidate(up);
    }
    auto x = x0;
    for (int step = 0; step < 10 * n_ + 10; ++step) {
      if (std::chrono::steady_clock::now() > deadline_) return;
      int pick = -1;
      double best = 2.0;
      for (int j = 0; j < n_; ++j) {
        if (!is_binary(j)) continue;
        const double f = fractionality(x[j]);
        if (f <= kIntTol) continue;
        if (f < best - 1e-12) {
          best = f;
          pick = j;
        }
      }
      if (pick < 0) {
        try_candidate(x);
        return;
      }
      const int val = x[pick] >= 0.5 ? 1 : 0;
      bool ok = false;
      for (int v : {val, 1 - val}) {
        lp_->set_col_bounds(pick, v, v);
        changed_.push_back(pick);
        const LpStatus st = solve_lp();
        if (st == LpStatus::Optimal) {
          ok = true;
          break;
        }
        if (st == LpStatus::TimeLimit) return;
      }
      if (!ok) return;
      x = lp_->primal();
    }
  }

  Solution& limit(Solution& sol, const std::string& why) {
    finish(sol, Status::LimitReached, why);
    return sol;
  }

  void finish(Solution& sol, Status status, const std::string& message) {
    cert_.status = status;
    cert_.message = message;
    if (incumbent_) {
      cert_.objective = sign_ * inc_obj_;
      double bound_internal = inc_obj_;
      if (status == Status::LimitReached || status == Status::FeasibleWithGap)
        bound_internal = std::min(inc_obj_, best_open_ + constant_internal());
      cert_.best_bound = sign_ * bound_internal;
      cert_.rel_gap = (inc_obj_ - bound_internal) / std::max(1.0, std::abs(inc_obj_));
      sol.assignment = inc_x_;
    } else {
      cert_.objective.reset();
      if (status == Status::LimitReached && std::isfinite(best_open_))
        cert_.best_bound = sign_ * (best_open_ + constant_internal());
      cert_.rel_gap = status == Status::Infeasible ? 0.0 : kInf;
    }
    cert_.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    sol.certificate = cert_;
    if (incumbent_) {
      for (const auto& v : m_.variables) {
        if (inc_x_[v.index] < 0.5) continue;
        if (v.kind == VarKind::Contact) sol.selected_contacts.push_back(v.ref);
        else if (v.kind == VarKind::Location) sol.selected_locations.push_back(v.ref);
        else if (v.kind == VarKind::Provider) sol.selected_providers.push_back(v.ref);
      }
      std::sort(sol.selected_contacts.begin(), sol.selected_contacts.end());
      std::sort(sol.selected_locations.begin(), sol.selected_locations.end());
      std::sort(sol.selected_providers.begin(), sol.selected_providers.end());
    }
  }
};

}  // namespace detail

/// Best-bound branch and bound over the dual simplex relaxation.
inline Solution solve(const IpModel& model, const SolveOptions& options = {}) {
  return detail::BranchAndBound(model, options).run();
}

inline Solution solve(const IpModel& model, const Limits& limits) {
  SolveOptions o;
  o.limits = limits;
  return solve(model, o);
}

}  // namespace gsopt::solver
