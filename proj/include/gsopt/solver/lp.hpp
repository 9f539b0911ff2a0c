#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsopt::solver {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit, Cutoff };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration_limit";
    case LpStatus::TimeLimit: return "time_limit";
    case LpStatus::Cutoff: return "cutoff";
  }
  return "?";
}

struct LpControl {
  long max_iterations = -1;  // -1: automatic
  std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max();
  double cutoff = kInf;      // stop once the dual bound exceeds this (unscaled objective)
};

/// Bounded-variable dual simplex over  min c'x  s.t.  row_lo <= A x <= row_hi,  lo <= x <= hi.
/// Every structural column must have finite bounds. Rows are equilibrated on insertion and the
/// cost vector is scaled by its largest magnitude; results are reported unscaled.
///
/// Internally row i carries a slack s_i = a_i x with bounds [row_lo, row_hi]; variables
/// 0..n-1 are structural and n..n+m-1 are slacks. The basis factor is a kernel LU of the
/// structural basic columns restricted to rows whose slack is nonbasic, followed by a
/// product-form eta file.
class DualSimplex {
 public:
  static constexpr std::uint8_t kBasic = 0, kLower = 1, kUpper = 2;

  double primal_tol = 1e-7;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int bland_after = 200;

  DualSimplex(std::vector<double> cost, std::vector<double> lo, std::vector<double> hi)
      : n_(static_cast<int>(cost.size())), cols_(cost.size()) {
    if (lo.size() != cost.size() || hi.size() != cost.size())
      throw std::invalid_argument("bound vectors must match the cost vector");
    double cmax = 0.0;
    for (double c : cost) cmax = std::max(cmax, std::abs(c));
    cost_scale_ = cmax > 0.0 ? 1.0 / cmax : 1.0;
    cost_.resize(cost.size());
    for (int j = 0; j < n_; ++j) {
      if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || lo[j] > hi[j])
        throw std::invalid_argument("structural bounds must be finite and ordered");
      cost_[j] = cost[j] * cost_scale_;
    }
    lo_ = std::move(lo);
    hi_ = std::move(hi);
    status_.assign(n_, kLower);
    x_.resize(n_);
    d_.assign(cost_.begin(), cost_.end());
    for (int j = 0; j < n_; ++j) {
      status_[j] = cost_[j] >= 0.0 ? kLower : kUpper;
      x_[j] = status_[j] == kLower ? lo_[j] : hi_[j];
    }
    pos_of_.assign(n_, -1);
    dirty_ = true;
  }

  [[nodiscard]] int num_cols() const { return n_; }
  [[nodiscard]] int num_rows() const { return m_; }
  [[nodiscard]] long iterations() const { return iterations_; }

  /// Appends a row; its slack enters the basis, which keeps the current basis dual feasible.
  int add_row(const std::vector<std::pair<int, double>>& terms, double lo, double hi) {
    double amax = 0.0;
    for (const auto& [j, a] : terms) {
      if (j < 0 || j >= n_) throw std::invalid_argument("row references unknown column");
      amax = std::max(amax, std::abs(a));
    }
    const double sc = amax > 0.0 ? 1.0 / amax : 1.0;
    const int i = m_++;
    rows_.emplace_back();
    for (const auto& [j, a] : terms) {
      if (a == 0.0) continue;
      rows_[i].emplace_back(j, a * sc);
      cols_[j].emplace_back(i, a * sc);
    }
    row_scale_.push_back(sc);
    lo_.push_back(lo * sc);
    hi_.push_back(hi * sc);
    cost_.push_back(0.0);
    status_.push_back(kBasic);
    double act = 0.0;
    for (const auto& [j, a] : rows_[i]) act += a * x_[j];
    x_.push_back(act);
    d_.push_back(0.0);
    head_.push_back(n_ + i);
    pos_of_.push_back(m_ - 1);
    dirty_ = true;
    return i;
  }

  void set_col_bounds(int j, double lo, double hi) {
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("invalid column bounds");
    lo_[j] = lo;
    hi_[j] = hi;
    if (status_[j] == kLower) x_[j] = lo;
    else if (status_[j] == kUpper) x_[j] = hi;
    dirty_ = true;
  }
  [[nodiscard]] double col_lo(int j) const { return lo_[j]; }
  [[nodiscard]] double col_hi(int j) const { return hi_[j]; }

  /// Basis snapshot: one status byte per structural column and per row.
  [[nodiscard]] std::vector<std::uint8_t> basis() const { return status_; }

  /// Restores a snapshot; rows added after the snapshot get basic slacks.
  void set_basis(const std::vector<std::uint8_t>& st) {
    const std::size_t total = static_cast<std::size_t>(n_ + m_);
    if (st.size() > total) throw std::invalid_argument("basis snapshot larger than the problem");
    status_ = st;
    status_.resize(total, kBasic);
    rebuild_head();
    dirty_ = true;
  }

  /// Resets to the all-slack basis, which is dual feasible by construction.
  void reset_basis() {
    for (int j = 0; j < n_; ++j) status_[j] = cost_[j] >= 0.0 ? kLower : kUpper;
    for (int i = 0; i < m_; ++i) status_[n_ + i] = kBasic;
    rebuild_head();
    dirty_ = true;
  }

  [[nodiscard]] std::vector<double> primal() const {
    return std::vector<double>(x_.begin(), x_.begin() + n_);
  }

  [[nodiscard]] double objective() const {
    long double s = 0.0L;
    for (int j = 0; j < n_; ++j) s += static_cast<long double>(cost_[j]) * x_[j];
    return static_cast<double>(s / cost_scale_);
  }

  /// Lower bound on the LP optimum from the current row duals, valid for any duals:
  /// c'x = d'x + y'(Ax) minimized over the column box and the implied row-activity box.
  [[nodiscard]] double dual_bound() {
    ensure_factor();
    std::vector<double> cb(m_);
    for (int p = 0; p < m_; ++p) cb[p] = head_[p] < n_ ? cost_[head_[p]] : 0.0;
    const auto y = btran(cb);
    long double bound = 0.0L;
    for (int j = 0; j < n_; ++j) {
      long double dj = cost_[j];
      for (const auto& [i, a] : cols_[j]) dj -= static_cast<long double>(y[i]) * a;
      bound += std::min(dj * lo_[j], dj * hi_[j]);
    }
    for (int i = 0; i < m_; ++i) {
      if (y[i] == 0.0) continue;
      long double alo = 0.0L, ahi = 0.0L;
      for (const auto& [j, a] : rows_[i]) {
        alo += std::min(static_cast<long double>(a) * lo_[j], static_cast<long double>(a) * hi_[j]);
        ahi += std::max(static_cast<long double>(a) * lo_[j], static_cast<long double>(a) * hi_[j]);
      }
      const long double slo = std::max<long double>(alo, lo_[n_ + i]);
      const long double shi = std::min<long double>(ahi, hi_[n_ + i]);
      if (slo > shi + 1e-9L * (1.0L + std::abs(shi))) return kInf;  // row unsatisfiable in the box
      bound += std::min(y[i] * slo, y[i] * std::max(slo, shi));
    }
    return static_cast<double>(bound / cost_scale_);
  }

  /// Largest violation of row or column bounds at the current point, in unscaled row units.
  [[nodiscard]] double max_primal_violation() const {
    double v = 0.0;
    for (int j = 0; j < n_; ++j) v = std::max({v, lo_[j] - x_[j], x_[j] - hi_[j]});
    for (int i = 0; i < m_; ++i) {
      long double act = 0.0L;
      for (const auto& [j, a] : rows_[i]) act += static_cast<long double>(a) * x_[j];
      const double s = static_cast<double>(act);
      v = std::max({v, (lo_[n_ + i] - s) / row_scale_[i], (s - hi_[n_ + i]) / row_scale_[i]});
    }
    return v;
  }

  LpStatus solve(const LpControl& ctrl = {}) {
    const long max_iter = ctrl.max_iterations >= 0 ? ctrl.max_iterations : 50L * (n_ + m_) + 10000;
    const double cutoff_scaled = ctrl.cutoff * cost_scale_;
    unstable_ = 0;
    long local = 0;
    int degenerate_run = 0;
    bool bland = false;
    int verify_rounds = 0;
    double last_obj = -kInf;
    std::vector<double> rho_pos(m_), alpha(n_ + m_, 0.0);
    std::vector<int> touched, banned;
    touched.reserve(n_ + m_);

    ensure_factor();
    for (;;) {
      if (local >= max_iter) return LpStatus::IterationLimit;
      if ((local & 31) == 0 && std::chrono::steady_clock::now() > ctrl.deadline) return LpStatus::TimeLimit;
      if (static_cast<int>(etas_.size()) >= refactor_interval) refresh();

      if (std::isfinite(cutoff_scaled) && (local & 7) == 0 && scaled_objective() > cutoff_scaled) {
        if (dual_bound() > ctrl.cutoff) return LpStatus::Cutoff;
      }

      // Leaving row: largest bound violation (lowest variable index under Bland's rule).
      int r = -1;
      double best = primal_tol;
      for (int p = 0; p < m_; ++p) {
        const int v = head_[p];
        const double inf = std::max(lo_[v] - x_[v], x_[v] - hi_[v]);
        if (inf <= primal_tol) continue;
        if (bland) {
          if (r < 0 || v < head_[r]) r = p;
        } else if (inf > best) {
          best = inf;
          r = p;
        }
      }
      if (r < 0) {
        if (verify_rounds++ < 2 && !etas_.empty()) {
          refresh();
          continue;
        }
        return LpStatus::Optimal;
      }
      const int leaving = head_[r];
      const bool to_lower = x_[leaving] < lo_[leaving];
      const double s = to_lower ? -1.0 : 1.0;
      const double target = to_lower ? lo_[leaving] : hi_[leaving];

      // Tableau row r.
      std::fill(rho_pos.begin(), rho_pos.end(), 0.0);
      rho_pos[r] = 1.0;
      const auto rho = btran(rho_pos);
      for (int j : touched) alpha[j] = 0.0;
      touched.clear();
      for (int i = 0; i < m_; ++i) {
        const double yi = rho[i];
        if (yi == 0.0) continue;
        for (const auto& [j, a] : rows_[i]) {
          if (status_[j] == kBasic) continue;
          if (alpha[j] == 0.0) touched.push_back(j);
          alpha[j] += yi * a;
          if (alpha[j] == 0.0) alpha[j] = 1e-300;
        }
        const int sv = n_ + i;
        if (status_[sv] != kBasic) {
          if (alpha[sv] == 0.0) touched.push_back(sv);
          alpha[sv] += -yi;
          if (alpha[sv] == 0.0) alpha[sv] = 1e-300;
        }
      }

      // Two-pass ratio test with a small dual tolerance; largest pivot among near-ties.
      double theta_max = kInf;
      auto candidate = [&](int j, double& ratio_num) -> bool {
        if (lo_[j] == hi_[j]) return false;
        if (!banned.empty() && std::find(banned.begin(), banned.end(), j) != banned.end()) return false;
        const double a = alpha[j] * s;
        if (std::abs(alpha[j]) < pivot_tol) return false;
        if (status_[j] == kLower && a > 0.0) {
          ratio_num = std::max(d_[j], 0.0);
          return true;
        }
        if (status_[j] == kUpper && a < 0.0) {
          ratio_num = std::max(-d_[j], 0.0);
          return true;
        }
        return false;
      };
      for (int j : touched) {
        double num;
        if (!candidate(j, num)) continue;
        theta_max = std::min(theta_max, (num + dual_tol) / std::abs(alpha[j]));
      }
      if (!std::isfinite(theta_max)) {
        if (!banned.empty()) {
          // Every usable pivot was rejected: restart from the slack basis.
          if (++unstable_ > 5) throw NumericalError("dual simplex: unstable pivot on a fresh factorization");
          banned.clear();
          reset_basis();
          ensure_factor();
          continue;
        }
        if (verify_rounds++ < 2 && !etas_.empty()) {
          refresh();
          continue;
        }
        return LpStatus::Infeasible;
      }
      int q = -1;
      double q_ratio = 0.0;
      for (int j : touched) {
        double num;
        if (!candidate(j, num)) continue;
        const double ratio = num / std::abs(alpha[j]);
        if (ratio > theta_max) continue;
        if (q < 0) {
          q = j;
          q_ratio = ratio;
          continue;
        }
        if (bland) {
          if (ratio < q_ratio - 1e-12 || (ratio <= q_ratio + 1e-12 && j < q)) {
            q = j;
            q_ratio = ratio;
          }
        } else if (std::abs(alpha[j]) > std::abs(alpha[q])) {
          q = j;
          q_ratio = ratio;
        }
      }

      const auto col = ftran_var(q);
      if (std::abs(col[r] - alpha[q]) > 1e-7 * (1.0 + std::abs(alpha[q])) ||
          std::abs(col[r]) < pivot_tol) {
        if (etas_.empty()) {
          banned.push_back(q);
        } else {
          refresh();
        }
        continue;
      }

      const double theta_d = s * q_ratio;
      for (int j : touched) d_[j] -= theta_d * alpha[j];
      d_[q] = 0.0;
      d_[leaving] = -theta_d;

      const double t = (x_[leaving] - target) / col[r];
      for (int p = 0; p < m_; ++p)
        if (col[p] != 0.0) x_[head_[p]] -= t * col[p];
      x_[q] += t;
      x_[leaving] = target;

      head_[r] = q;
      pos_of_[q] = r;
      pos_of_[leaving] = -1;
      status_[q] = kBasic;
      status_[leaving] = to_lower ? kLower : kUpper;
      push_eta(r, col);

      ++local;
      ++iterations_;
      verify_rounds = 0;
      banned.clear();
      unstable_ = 0;
      const double obj = scaled_objective();
      if (obj <= last_obj + 1e-12 * (1.0 + std::abs(obj))) {
        if (++degenerate_run > bland_after) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      last_obj = std::max(last_obj, obj);
    }
  }

 private:
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> col;  // off-pivot entries
  };

  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<std::pair<int, double>>> cols_;  // structural columns (row, value)
  std::vector<std::vector<std::pair<int, double>>> rows_;  // rows (column, value)
  std::vector<double> row_scale_;
  std::vector<double> cost_, lo_, hi_, x_, d_;
  std::vector<std::uint8_t> status_;
  std::vector<int> head_;    // position -> variable
  std::vector<int> pos_of_;  // variable -> position or -1
  double cost_scale_ = 1.0;
  long iterations_ = 0;
  int unstable_ = 0;
  bool dirty_ = true;

  // Kernel factor of the base basis.
  std::vector<int> base_head_;
  std::vector<int> kcols_;          // kernel column -> structural variable
  std::vector<int> kpos_;           // kernel column -> base position
  std::vector<int> krows_;          // kernel row -> row
  std::vector<char> slack_basic_;   // row -> slack basic in base
  std::vector<int> slack_pos_;      // row -> base position of its slack (or -1)
  bool dense_ = true;
  Eigen::PartialPivLU<Eigen::MatrixXd> dense_lu_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>> sparse_lu_;
  std::vector<Eta> etas_;

  double scaled_objective() const {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += cost_[j] * x_[j];
    return s;
  }

  void rebuild_head() {
    head_.clear();
    pos_of_.assign(n_ + m_, -1);
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] != kBasic) continue;
      pos_of_[v] = static_cast<int>(head_.size());
      head_.push_back(v);
    }
    if (static_cast<int>(head_.size()) != m_) {
      // Inconsistent snapshot: fall back to the slack basis.
      for (int j = 0; j < n_; ++j)
        if (status_[j] == kBasic) status_[j] = cost_[j] >= 0.0 ? kLower : kUpper;
      for (int i = 0; i < m_; ++i) status_[n_ + i] = kBasic;
      head_.clear();
      pos_of_.assign(n_ + m_, -1);
      for (int i = 0; i < m_; ++i) {
        pos_of_[n_ + i] = i;
        head_.push_back(n_ + i);
      }
    }
  }

  bool factorize() {
    etas_.clear();
    base_head_ = head_;
    kcols_.clear();
    kpos_.clear();
    krows_.clear();
    slack_basic_.assign(m_, 0);
    slack_pos_.assign(m_, -1);
    for (int p = 0; p < m_; ++p) {
      const int v = head_[p];
      if (v >= n_) {
        slack_basic_[v - n_] = 1;
        slack_pos_[v - n_] = p;
      } else {
        kcols_.push_back(v);
        kpos_.push_back(p);
      }
    }
    std::vector<int> krow_of(m_, -1);
    for (int i = 0; i < m_; ++i)
      if (!slack_basic_[i]) {
        krow_of[i] = static_cast<int>(krows_.size());
        krows_.push_back(i);
      }
    const int k = static_cast<int>(kcols_.size());
    if (static_cast<int>(krows_.size()) != k) return false;
    if (k == 0) return true;
    dense_ = k <= 300;
    if (dense_) {
      Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k, k);
      for (int t = 0; t < k; ++t)
        for (const auto& [i, a] : cols_[kcols_[t]])
          if (krow_of[i] >= 0) K(krow_of[i], t) = a;
      dense_lu_.compute(K);
      const auto& lu = dense_lu_.matrixLU();
      double umax = 0.0, umin = kInf;
      for (int t = 0; t < k; ++t) {
        umax = std::max(umax, std::abs(lu(t, t)));
        umin = std::min(umin, std::abs(lu(t, t)));
      }
      return umin > 1e-11 * std::max(1.0, umax);
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (int t = 0; t < k; ++t)
      for (const auto& [i, a] : cols_[kcols_[t]])
        if (krow_of[i] >= 0) trip.emplace_back(krow_of[i], t, a);
    Eigen::SparseMatrix<double> K(k, k);
    K.setFromTriplets(trip.begin(), trip.end());
    K.makeCompressed();
    sparse_lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>>>();
    sparse_lu_->compute(K);
    return sparse_lu_->info() == Eigen::Success;
  }

  Eigen::VectorXd kernel_solve(const Eigen::VectorXd& b, bool transpose) const {
    if (dense_) return transpose ? Eigen::VectorXd(dense_lu_.transpose().solve(b)) : Eigen::VectorXd(dense_lu_.solve(b));
    return transpose ? Eigen::VectorXd(sparse_lu_->transpose().solve(b)) : Eigen::VectorXd(sparse_lu_->solve(b));
  }

  // B^{-1} rhs, rhs indexed by row, result indexed by position.
  std::vector<double> ftran(const std::vector<double>& rhs) const {
    std::vector<double> out(m_, 0.0);
    const int k = static_cast<int>(kcols_.size());
    std::vector<double> acc(m_, 0.0);
    if (k > 0) {
      Eigen::VectorXd b(k);
      for (int t = 0; t < k; ++t) b[t] = rhs[krows_[t]];
      const Eigen::VectorXd z = kernel_solve(b, false);
      for (int t = 0; t < k; ++t) {
        out[kpos_[t]] = z[t];
        if (z[t] == 0.0) continue;
        for (const auto& [i, a] : cols_[kcols_[t]]) acc[i] += a * z[t];
      }
    }
    for (int i = 0; i < m_; ++i)
      if (slack_basic_[i]) out[slack_pos_[i]] = acc[i] - rhs[i];
    for (const auto& e : etas_) {
      const double xr = out[e.pos] / e.pivot;
      if (xr != 0.0)
        for (const auto& [p, a] : e.col) out[p] -= a * xr;
      out[e.pos] = xr;
    }
    return out;
  }

  // y' = z' B^{-1}, z indexed by position, y indexed by row.
  std::vector<double> btran(std::vector<double> z) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double v = z[it->pos];
      for (const auto& [p, a] : it->col) v -= a * z[p];
      z[it->pos] = v / it->pivot;
    }
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i)
      if (slack_basic_[i]) y[i] = -z[slack_pos_[i]];
    const int k = static_cast<int>(kcols_.size());
    if (k > 0) {
      Eigen::VectorXd b(k);
      for (int t = 0; t < k; ++t) {
        double v = z[kpos_[t]];
        for (const auto& [i, a] : cols_[kcols_[t]])
          if (slack_basic_[i]) v -= a * y[i];
        b[t] = v;
      }
      const Eigen::VectorXd w = kernel_solve(b, true);
      for (int t = 0; t < k; ++t) y[krows_[t]] = w[t];
    }
    return y;
  }

  std::vector<double> ftran_var(int v) const {
    std::vector<double> rhs(m_, 0.0);
    if (v < n_) {
      for (const auto& [i, a] : cols_[v]) rhs[i] = a;
    } else {
      rhs[v - n_] = -1.0;
    }
    return ftran(rhs);
  }

  void push_eta(int r, const std::vector<double>& col) {
    Eta e;
    e.pos = r;
    e.pivot = col[r];
    for (int p = 0; p < m_; ++p)
      if (p != r && col[p] != 0.0) e.col.emplace_back(p, col[p]);
    etas_.push_back(std::move(e));
  }

  // Fresh factorization, primal values and reduced costs.
  void refresh() {
    if (!factorize()) {
      reset_basis();
      if (!factorize()) throw NumericalError("dual simplex: slack basis failed to factorize");
    }
    // Nonbasic values at their bounds.
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == kLower) x_[v] = lo_[v];
      else if (status_[v] == kUpper) x_[v] = hi_[v];
    }
    // Dual values and sign repair of boxed nonbasics.
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<double> cb(m_);
      for (int p = 0; p < m_; ++p) cb[p] = head_[p] < n_ ? cost_[head_[p]] : 0.0;
      const auto y = btran(cb);
      bool flipped = false;
      for (int v = 0; v < n_ + m_; ++v) {
        if (status_[v] == kBasic) {
          d_[v] = 0.0;
          continue;
        }
        double dv;
        if (v < n_) {
          dv = cost_[v];
          for (const auto& [i, a] : cols_[v]) dv -= y[i] * a;
        } else {
          dv = y[v - n_];
        }
        d_[v] = dv;
        if (pass == 0 && lo_[v] != hi_[v] && std::isfinite(lo_[v]) && std::isfinite(hi_[v])) {
          if (status_[v] == kLower && dv < -dual_tol) {
            status_[v] = kUpper;
            x_[v] = hi_[v];
            flipped = true;
          } else if (status_[v] == kUpper && dv > dual_tol) {
            status_[v] = kLower;
            x_[v] = lo_[v];
            flipped = true;
          }
        }
      }
      if (!flipped) break;
    }
    // Basic values from B x_B = -N x_N (rows: a x - s = 0).
    std::vector<double> rhs(m_, 0.0);
    for (int v = 0; v < n_ + m_; ++v) {
      if (status_[v] == kBasic || x_[v] == 0.0) continue;
      if (v < n_) {
        for (const auto& [i, a] : cols_[v]) rhs[i] -= a * x_[v];
      } else {
        rhs[v - n_] += x_[v];
      }
    }
    const auto xb = ftran(rhs);
    for (int p = 0; p < m_; ++p) x_[head_[p]] = xb[p];
    // Residual check.
    double res = 0.0;
    for (int i = 0; i < m_; ++i) {
      double act = 0.0;
      for (const auto& [j, a] : rows_[i]) act += a * x_[j];
      res = std::max(res, std::abs(act - x_[n_ + i]));
    }
    if (res > 1e-6) {
      if (++unstable_ > 5)
        throw NumericalError("dual simplex: basis residual " + std::to_string(res) + " after refactorization");
      reset_basis();
      refresh();
      return;
    }
    dirty_ = false;
  }

  void ensure_factor() {
    if (dirty_) refresh();
  }
};

}  // namespace gsopt::solver
