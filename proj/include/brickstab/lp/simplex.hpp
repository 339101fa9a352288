#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "brickstab/lp/basis_factor.hpp"
#include "brickstab/lp/problem.hpp"

namespace brickstab::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit, TimeLimit };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
    case Status::TimeLimit: return "time-limit";
  }
  return "unknown";
}

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-11;
  /// Steps shorter than this count as degenerate; |alpha| below it is never a pivot.
  double pivot_tol = 1e-7;
  int refactor_interval = 100;
  /// Consecutive degenerate pivots tolerated before switching to Bland's rule.
  int degenerate_switch = 1000;
  /// Dual/primal alternations allowed before giving up on a solve.
  int max_rounds = 20;
  long max_iterations = 50'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct Solution {
  Status status = Status::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> row_activity;
  std::vector<double> row_dual;
  std::vector<double> reduced_cost;
  long iterations = 0;
};

/// Bounded simplex over a Problem.
///
/// Every row gets a logical variable s_i = a_i x bounded by the row bounds,
/// so the working system is [A  -I] (x, s) = 0. A solve starts from the
/// slack basis, or from the final basis of the previous solve() when one
/// exists, and runs the dual simplex (dual Devex pricing, Harris
/// ratio test) with costs shifted where the start is not dual feasible. The
/// shifts are then removed and the primal simplex (Devex pricing, Harris
/// ratio test, Bland's rule after a run of degenerate pivots) finishes from
/// the primal feasible basis. If refactorization uncovers a loss of primal
/// feasibility the dual phase runs again.
class Simplex {
 public:
  explicit Simplex(const Problem& problem, SimplexOptions options = {})
      : p_(problem), rows_(problem), opt_(options), n_(problem.num_cols()), m_(problem.num_rows()) {
    lower_.assign(problem.col_lower.begin(), problem.col_lower.end());
    upper_.assign(problem.col_upper.begin(), problem.col_upper.end());
    row_lower_.assign(problem.row_lower.begin(), problem.row_lower.end());
    row_upper_.assign(problem.row_upper.begin(), problem.row_upper.end());
    // RowMatrix fills each row in column order, so entries map across in one sweep.
    slot_of_.resize(problem.num_nonzeros());
    entry_of_slot_.resize(problem.num_nonzeros());
    std::vector<std::size_t> next(rows_.row_start.begin(), rows_.row_start.end() - 1);
    for (std::size_t e = 0; e < problem.num_nonzeros(); ++e) {
      const std::size_t slot = next[problem.row_index[e]]++;
      slot_of_[e] = slot;
      entry_of_slot_[slot] = e;
    }
    row_split_.assign(rows_.row_start.begin() + 1, rows_.row_start.end());
  }

  /// Overrides a structural column's bounds for the next solve().
  void set_column_bounds(int j, double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
    lower_.at(j) = lower;
    upper_.at(j) = upper;
  }

  /// Overrides a row's bounds for the next solve(); infinite bounds on both
  /// sides take the row out of the problem.
  void set_row_bounds(int i, double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("row lower bound exceeds upper bound");
    row_lower_.at(i) = lower;
    row_upper_.at(i) = upper;
  }

  /// Makes the next solve() start from the slack basis.
  void reset_basis() { has_basis_ = false; }

  Solution solve() {
    iterations_ = 0;
    load_bounds();
    if (has_basis_) {
      reseat_nonbasics();
    } else {
      slack_basis();
    }
    has_basis_ = true;
    Status status = Status::IterationLimit;
    for (int round = 0; round < opt_.max_rounds; ++round) {
      status = run_dual();
      if (status != Status::Optimal) break;
      restore_costs();
      lost_feasibility_ = false;
      status = run_primal();
      if (!lost_feasibility_) break;
      status = Status::IterationLimit;
    }
    return extract(status);
  }

 private:
  enum : char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kAtZero = 3 };

  static bool finite(double v) { return std::abs(v) < kInfinity; }

  int total() const { return n_ + m_; }

  void column(int j, std::vector<int>& rows, std::vector<double>& vals) const {
    if (j < n_) {
      auto r = p_.column_rows(j);
      auto v = p_.column_values(j);
      rows.insert(rows.end(), r.begin(), r.end());
      vals.insert(vals.end(), v.begin(), v.end());
    } else {
      rows.push_back(j - n_);
      vals.push_back(-1.0);
    }
  }

  template <class Fn>
  void for_column(int j, Fn&& fn) const {
    if (j < n_) {
      auto r = p_.column_rows(j);
      auto v = p_.column_values(j);
      for (std::size_t k = 0; k < r.size(); ++k) fn(r[k], v[k]);
    } else {
      fn(j - n_, -1.0);
    }
  }

  static double rest_value(double lo, double hi, char& state) {
    if (finite(lo)) {
      state = kAtLower;
      return lo;
    }
    if (finite(hi)) {
      state = kAtUpper;
      return hi;
    }
    state = kAtZero;
    return 0.0;
  }

  double infeasibility(int j) const { return std::max({lo_[j] - x_[j], x_[j] - hi_[j], 0.0}); }

  void load_bounds() {
    lo_.assign(total(), 0.0);
    hi_.assign(total(), 0.0);
    cost_.assign(total(), 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lower_[j];
      hi_[j] = upper_[j];
      cost_[j] = p_.cost[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = row_lower_[i];
      hi_[n_ + i] = row_upper_[i];
    }
    c_ = cost_;
  }

  /// All logicals basic; each structural at the bound its cost prefers.
  void slack_basis() {
    x_.assign(total(), 0.0);
    state_.assign(total(), kAtLower);
    basis_.resize(m_);
    pos_.assign(total(), -1);
    for (int j = 0; j < n_; ++j) {
      const bool prefer_upper = c_[j] < 0.0 && finite(hi_[j]);
      if (prefer_upper) {
        state_[j] = kAtUpper;
        x_[j] = hi_[j];
      } else {
        x_[j] = rest_value(lo_[j], hi_[j], state_[j]);
      }
    }
    for (int i = 0; i < m_; ++i) {
      basis_[i] = n_ + i;
      pos_[n_ + i] = i;
      state_[n_ + i] = kBasic;
    }
    dual_weight_.assign(m_, 1.0);
    d_.assign(total(), 0.0);
    weight_.assign(total(), 1.0);
    acc_.assign(total(), 0.0);
    acc_mark_.assign(total(), 0);
  }

  /// Puts the nonbasics of the kept basis back on their (possibly changed) bounds.
  void reseat_nonbasics() {
    for (int j = 0; j < total(); ++j) {
      char& st = state_[j];
      if (st == kBasic) continue;
      if (st == kAtUpper && finite(hi_[j])) {
        x_[j] = hi_[j];
      } else if (st == kAtLower && finite(lo_[j])) {
        x_[j] = lo_[j];
      } else {
        x_[j] = rest_value(lo_[j], hi_[j], st);
      }
    }
  }

  void restore_costs() {
    c_ = cost_;
    compute_duals();
  }

  void refactor() {
    for (int attempt = 0; attempt <= m_; ++attempt) {
      auto sing = lu_.factorize(m_, [&](int pos, std::vector<int>& r, std::vector<double>& v) {
        column(basis_[pos], r, v);
      });
      if (sing.empty()) {
        partition_rows();
        return;
      }
      // Swap the unpivoted columns for the logicals of the unpivoted rows.
      for (std::size_t k = 0; k < sing.positions.size(); ++k) {
        const int pos = sing.positions[k];
        const int out = basis_[pos];
        const int in = n_ + sing.rows[k];
        if (pos_[in] >= 0) continue;
        double value = x_[out];
        char st = kAtZero;
        if (finite(lo_[out]) && (!finite(hi_[out]) || std::abs(value - lo_[out]) <= std::abs(value - hi_[out]))) {
          value = lo_[out];
          st = kAtLower;
        } else if (finite(hi_[out])) {
          value = hi_[out];
          st = kAtUpper;
        } else {
          value = 0.0;
        }
        x_[out] = value;
        state_[out] = st;
        pos_[out] = -1;
        basis_[pos] = in;
        pos_[in] = pos;
        state_[in] = kBasic;
        dual_weight_[pos] = 1.0;
      }
    }
    throw std::runtime_error("basis factorization failed to recover from singularity");
  }

  void compute_primal() {
    std::vector<double> rhs(m_, 0.0);
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == kBasic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](int i, double v) { rhs[i] -= v * xj; });
    }
    lu_.ftran(rhs, work_);
    for (int i = 0; i < m_; ++i) x_[basis_[i]] = work_[i];
  }

  void compute_duals() {
    std::vector<double> cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = c_[basis_[i]];
    lu_.btran(cb, y_);
    for (int j = 0; j < total(); ++j) {
      if (state_[j] == kBasic) {
        d_[j] = 0.0;
        continue;
      }
      double dj = c_[j];
      for_column(j, [&](int i, double v) { dj -= v * y_[i]; });
      d_[j] = dj;
    }
  }

  double max_primal_infeasibility() const {
    double worst = 0.0;
    for (int i = 0; i < m_; ++i) worst = std::max(worst, infeasibility(basis_[i]));
    return worst;
  }

  bool out_of_time() const {
    return opt_.deadline && std::chrono::steady_clock::now() >= *opt_.deadline;
  }

  /// Fills acc_ with the pivot row rho' [A -I] over the nonbasic columns listed in touched_.
  void pivot_row(const std::vector<double>& rho) {
    touched_.clear();
    auto touch = [&](int j, double v) {
      if (state_[j] == kBasic) return;
      if (!acc_mark_[j]) {
        acc_mark_[j] = 1;
        acc_[j] = 0.0;
        touched_.push_back(j);
      }
      acc_[j] += v;
    };
    for (int i = 0; i < m_; ++i) {
      const double ri = rho[i];
      if (std::abs(ri) <= 1e-14) continue;
      for (std::size_t e = rows_.row_start[i]; e < row_split_[i]; ++e) {
        const int j = rows_.col_index[e];
        if (!acc_mark_[j]) {
          acc_mark_[j] = 1;
          acc_[j] = 0.0;
          touched_.push_back(j);
        }
        acc_[j] += ri * rows_.value[e];
      }
      touch(n_ + i, -ri);
    }
  }

  void clear_pivot_row() {
    for (int j : touched_) acc_mark_[j] = 0;
    touched_.clear();
  }

  void ftran_column(int q) {
    rhs_.assign(m_, 0.0);
    for_column(q, [&](int i, double v) { rhs_[i] += v; });
    lu_.ftran(rhs_, alpha_);
    nz_.clear();
    for (int i = 0; i < m_; ++i)
      if (alpha_[i] != 0.0) nz_.push_back(i);
  }

  void swap_basis(int leave, int q) {
    const int out = basis_[leave];
    pos_[out] = -1;
    pos_[q] = leave;
    basis_[leave] = q;
    state_[q] = kBasic;
    lu_.update(leave, alpha_, nz_);
    move_to_basic(q);
    move_to_nonbasic(out);
  }

  // Each row of rows_ keeps its nonbasic structural entries ahead of row_split_[i].

  void swap_slots(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(rows_.col_index[a], rows_.col_index[b]);
    std::swap(rows_.value[a], rows_.value[b]);
    std::swap(entry_of_slot_[a], entry_of_slot_[b]);
    slot_of_[entry_of_slot_[a]] = a;
    slot_of_[entry_of_slot_[b]] = b;
  }

  void move_to_basic(int j) {
    if (j >= n_) return;
    for (std::size_t e = p_.col_start[j]; e < p_.col_start[j + 1]; ++e) {
      const int i = p_.row_index[e];
      swap_slots(slot_of_[e], --row_split_[i]);
    }
  }

  void move_to_nonbasic(int j) {
    if (j >= n_) return;
    for (std::size_t e = p_.col_start[j]; e < p_.col_start[j + 1]; ++e) {
      const int i = p_.row_index[e];
      swap_slots(slot_of_[e], row_split_[i]++);
    }
  }

  void partition_rows() {
    for (int i = 0; i < m_; ++i) {
      std::size_t split = rows_.row_start[i];
      for (std::size_t e = rows_.row_start[i]; e < rows_.row_start[i + 1]; ++e)
        if (state_[rows_.col_index[e]] != kBasic) swap_slots(e, split++);
      row_split_[i] = split;
    }
  }

  // ---------------------------------------------------------------- dual

  /// Flips boxed columns and shifts costs so every nonbasic reduced cost has the right sign.
  void make_dual_feasible() {
    bool flipped = false;
    for (int j = 0; j < total(); ++j) {
      const char st = state_[j];
      if (st == kBasic || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      if (st == kAtLower && dj < -opt_.dual_tol) {
        if (finite(hi_[j])) {
          state_[j] = kAtUpper;
          x_[j] = hi_[j];
          flipped = true;
        } else {
          c_[j] -= dj;
          d_[j] = 0.0;
        }
      } else if (st == kAtUpper && dj > opt_.dual_tol) {
        if (finite(lo_[j])) {
          state_[j] = kAtLower;
          x_[j] = lo_[j];
          flipped = true;
        } else {
          c_[j] -= dj;
          d_[j] = 0.0;
        }
      } else if (st == kAtZero && std::abs(dj) > opt_.dual_tol) {
        c_[j] -= dj;
        d_[j] = 0.0;
      }
    }
    if (flipped) compute_primal();
  }

  void recompute_dual() {
    refactor();
    compute_primal();
    compute_duals();
    make_dual_feasible();
    fresh_ = true;
  }

  /// Basis position with the largest squared infeasibility per dual Devex weight.
  int choose_leaving() const {
    int best = -1;
    double best_score = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double v = infeasibility(basis_[i]);
      if (v <= opt_.primal_tol) continue;
      const double score = v * v / dual_weight_[i];
      // Near-equal scores keep the lower position.
      if (score > best_score * (1.0 + 1e-9)) {
        best_score = score;
        best = i;
      }
    }
    return best;
  }

  /// Harris ratio test on the pivot row. `toward_lower` is true when the leaving
  /// variable moves up to its lower bound. Returns the entering column or -1.
  int dual_ratio_test(bool toward_lower, double& ratio_q) {
    const double sign = toward_lower ? -1.0 : 1.0;
    double bound = kInfinity;
    cands_.clear();
    for (int j : touched_) {
      const double a = sign * acc_[j];
      if (std::abs(a) <= opt_.pivot_tol || lo_[j] == hi_[j]) continue;
      const char st = state_[j];
      const double dj = d_[j];
      double r, relaxed;
      if (st == kAtLower) {
        if (a < 0) continue;
        r = dj / a;
        relaxed = (dj + opt_.dual_tol) / a;
      } else if (st == kAtUpper) {
        if (a > 0) continue;
        r = dj / a;
        relaxed = (dj - opt_.dual_tol) / a;
      } else {
        r = std::abs(dj) / std::abs(a);
        relaxed = (std::abs(dj) + opt_.dual_tol) / std::abs(a);
      }
      bound = std::min(bound, relaxed);
      cands_.push_back({j, r});
    }
    int q = -1;
    double best_abs = 0.0;
    for (const auto& [j, r] : cands_) {
      const double a = std::abs(acc_[j]);
      if (r <= bound && (a > best_abs || (a == best_abs && j < q))) {
        best_abs = a;
        ratio_q = r;
        q = j;
      }
    }
    return q;
  }

  Status run_dual() {
    recompute_dual();
    std::vector<double> unit, rho;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return Status::IterationLimit;
      if ((iterations_ & 63) == 0 && out_of_time()) return Status::TimeLimit;
      if (lu_.num_updates() >= opt_.refactor_interval) recompute_dual();

      const int leave = choose_leaving();
      if (leave < 0) {
        if (fresh_) return Status::Optimal;
        recompute_dual();
        continue;
      }
      const int out = basis_[leave];
      const bool toward_lower = x_[out] < lo_[out];
      const double target = toward_lower ? lo_[out] : hi_[out];

      unit.assign(m_, 0.0);
      unit[leave] = 1.0;
      lu_.btran(unit, rho);



      pivot_row(rho);
      double ratio_q = 0.0;
      const int q = dual_ratio_test(toward_lower, ratio_q);
      if (q < 0) {
        clear_pivot_row();
        if (!fresh_) {
          recompute_dual();
          continue;
        }
        return Status::Infeasible;
      }

      ftran_column(q);
      const double apq = alpha_[leave];
      const double row_apq = acc_[q];
      if (std::abs(row_apq - apq) > 1e-8 * (1.0 + std::abs(apq)) || std::abs(apq) <= opt_.pivot_tol) {
        clear_pivot_row();
        if (lu_.num_updates() > 0) {
          recompute_dual();
          continue;
        }
        // A fresh factor disagreeing with itself: drop this row for one pass.
        dual_weight_[leave] *= 1e6;
        continue;
      }


      ++iterations_;
      fresh_ = false;

      if (ratio_q < 0.0) {
        c_[q] -= d_[q];
        d_[q] = 0.0;
      }
      const double theta_d = d_[q] / apq;
      for (int j : touched_) {
        acc_mark_[j] = 0;
        if (j != q) d_[j] -= theta_d * acc_[j];
      }
      touched_.clear();

      const double step = (x_[out] - target) / apq;
      for (int i : nz_) x_[basis_[i]] -= step * alpha_[i];
      x_[q] += step;
      x_[out] = target;
      state_[out] = (toward_lower || lo_[out] == hi_[out]) ? kAtLower : kAtUpper;
      d_[out] = -theta_d;
      d_[q] = 0.0;

      const double wp = dual_weight_[leave];
      for (int i : nz_) {
        if (i == leave) continue;
        const double r = alpha_[i] / apq;
        dual_weight_[i] = std::max(dual_weight_[i], r * r * wp);
      }
      dual_weight_[leave] = std::max(wp / (apq * apq), 1e-8);
      swap_basis(leave, q);
    }
  }

  // -------------------------------------------------------------- primal

  void recompute_primal() {
    refactor();
    compute_primal();
    compute_duals();
    std::fill(weight_.begin(), weight_.end(), 1.0);
    rebuild_candidates();
    fresh_ = true;
  }

  bool eligible(int j) const {
    const char st = state_[j];
    if (st == kBasic || lo_[j] == hi_[j]) return false;
    const double dj = d_[j];
    if (st == kAtLower) return dj < -opt_.dual_tol;
    if (st == kAtUpper) return dj > opt_.dual_tol;
    return std::abs(dj) > opt_.dual_tol;
  }

  /// Keeps j's membership in the candidate list in sync with eligible(j).
  void refresh(int j) {
    const bool e = eligible(j);
    const int at = cand_at_[j];
    if (e && at < 0) {
      cand_at_[j] = static_cast<int>(cand_.size());
      cand_.push_back(j);
    } else if (!e && at >= 0) {
      const int last = cand_.back();
      cand_[at] = last;
      cand_at_[last] = at;
      cand_.pop_back();
      cand_at_[j] = -1;
    }
  }

  void rebuild_candidates() {
    cand_.clear();
    cand_at_.assign(total(), -1);
    for (int j = 0; j < total(); ++j) refresh(j);
  }

  /// Devex choice among the eligible columns; ties and Bland's rule take the lowest index.
  int price() const {
    int best = -1;
    double best_score = 0.0;
    for (int j : cand_) {
      if (bland_) {
        if (best < 0 || j < best) best = j;
        continue;
      }
      const double dj = d_[j];
      const double score = dj * dj / weight_[j];
      if (score > best_score || (score == best_score && j < best)) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  /// Primal simplex from a primal feasible basis. Sets lost_feasibility_ and
  /// returns when a refactorization shows the basis is no longer feasible.
  Status run_primal() {
    recompute_primal();
    if (max_primal_infeasibility() > opt_.primal_tol) {
      lost_feasibility_ = true;
      return Status::Optimal;
    }
    int degenerate_run = 0;
    bland_ = false;
    std::vector<double> unit, rho;
    for (;;) {
      if (iterations_ >= opt_.max_iterations) return Status::IterationLimit;
      if ((iterations_ & 63) == 0 && out_of_time()) return Status::TimeLimit;
      if (lu_.num_updates() >= opt_.refactor_interval) {
        recompute_primal();
        if (max_primal_infeasibility() > opt_.primal_tol) {
          lost_feasibility_ = true;
          return Status::Optimal;
        }
      }

      int q = price();
      if (q < 0) {
        if (fresh_) return Status::Optimal;
        recompute_primal();
        if (max_primal_infeasibility() > opt_.primal_tol) {
          lost_feasibility_ = true;
          return Status::Optimal;
        }
        q = price();
        if (q < 0) return Status::Optimal;
      }
      const double dir = (state_[q] == kAtUpper || (state_[q] == kAtZero && d_[q] > 0)) ? -1.0 : 1.0;
      ftran_column(q);

      // Ratio test.
      const double range = hi_[q] - lo_[q];
      int leave = -1;
      double theta = kInfinity;
      if (bland_) {
        for (int i : nz_) {
          const double rate = -dir * alpha_[i];
          if (std::abs(alpha_[i]) <= opt_.pivot_tol) continue;
          const int b = basis_[i];
          double ratio;
          if (rate < 0 && finite(lo_[b])) ratio = (x_[b] - lo_[b]) / -rate;
          else if (rate > 0 && finite(hi_[b])) ratio = (hi_[b] - x_[b]) / rate;
          else continue;
          ratio = std::max(ratio, 0.0);
          if (leave < 0 || ratio < theta - 1e-12 || (ratio <= theta + 1e-12 && b < basis_[leave])) {
            theta = ratio;
            leave = i;
          }
        }
      } else {
        double bound = kInfinity;
        for (int i : nz_) {
          const double rate = -dir * alpha_[i];
          if (std::abs(alpha_[i]) <= opt_.pivot_tol) continue;
          const int b = basis_[i];
          if (rate < 0 && finite(lo_[b])) bound = std::min(bound, (x_[b] - lo_[b] + opt_.primal_tol) / -rate);
          else if (rate > 0 && finite(hi_[b])) bound = std::min(bound, (hi_[b] + opt_.primal_tol - x_[b]) / rate);
        }
        double best_alpha = 0.0;
        for (int i : nz_) {
          const double rate = -dir * alpha_[i];
          if (std::abs(alpha_[i]) <= opt_.pivot_tol) continue;
          const int b = basis_[i];
          double ratio;
          if (rate < 0 && finite(lo_[b])) ratio = (x_[b] - lo_[b]) / -rate;
          else if (rate > 0 && finite(hi_[b])) ratio = (hi_[b] - x_[b]) / rate;
          else continue;
          if (ratio <= bound && std::abs(alpha_[i]) > best_alpha) {
            best_alpha = std::abs(alpha_[i]);
            theta = std::max(ratio, 0.0);
            leave = i;
          }
        }
      }

      ++iterations_;
      const bool was_fresh = fresh_;
      fresh_ = false;

      if (finite(range) && (leave < 0 || range <= theta)) {
        // Bound flip: the entering variable crosses to its other bound.
        for (int i : nz_) x_[basis_[i]] -= dir * range * alpha_[i];
        x_[q] = dir > 0 ? hi_[q] : lo_[q];
        state_[q] = dir > 0 ? kAtUpper : kAtLower;
        refresh(q);
        degenerate_run = 0;
        bland_ = false;
        continue;
      }
      if (leave < 0) {
        if (!was_fresh) {
          recompute_primal();
          continue;
        }
        return Status::Unbounded;
      }

      // Pivot row alpha_p = e_p' B^-1 [A -I] restricted to nonbasics.
      unit.assign(m_, 0.0);
      unit[leave] = 1.0;
      lu_.btran(unit, rho);
      pivot_row(rho);
      const double apq = alpha_[leave];
      const double row_apq = acc_mark_[q] ? acc_[q] : 0.0;
      if (std::abs(row_apq - apq) > 1e-8 * (1.0 + std::abs(apq)) && lu_.num_updates() > 0) {
        clear_pivot_row();
        recompute_primal();
        continue;
      }

      const double theta_d = d_[q] / apq;
      const double wq = weight_[q];
      for (int j : touched_) {
        acc_mark_[j] = 0;
        if (j == q) continue;
        const double a = acc_[j];
        d_[j] -= theta_d * a;
        const double ratio = a / apq;
        weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        refresh(j);
      }
      touched_.clear();

      const int out = basis_[leave];
      const double rate = -dir * apq;
      for (int i : nz_) x_[basis_[i]] -= dir * theta * alpha_[i];
      x_[q] += dir * theta;
      if (rate < 0) {
        x_[out] = lo_[out];
        state_[out] = kAtLower;
      } else {
        x_[out] = hi_[out];
        state_[out] = kAtUpper;
      }
      if (lo_[out] == hi_[out]) state_[out] = kAtLower;
      d_[out] = -theta_d;
      weight_[out] = std::max(wq / (apq * apq), 1.0);
      d_[q] = 0.0;
      dual_weight_[leave] = 1.0;
      swap_basis(leave, q);
      refresh(q);
      refresh(out);

      if (theta <= opt_.pivot_tol) {
        if (++degenerate_run > opt_.degenerate_switch) bland_ = true;
      } else {
        degenerate_run = 0;
        bland_ = false;
      }
      if (wq > 1e8) std::fill(weight_.begin(), weight_.end(), 1.0);
    }
  }

  Solution extract(Status status) {
    Solution s;
    s.status = status;
    s.iterations = iterations_;
    s.x.assign(x_.begin(), x_.begin() + n_);
    s.row_activity.assign(x_.begin() + n_, x_.begin() + n_ + m_);
    s.row_dual = y_;
    s.reduced_cost.assign(d_.begin(), d_.begin() + n_);
    s.objective = p_.objective(s.x);
    return s;
  }

  const Problem& p_;
  RowMatrix rows_;
  SimplexOptions opt_;
  int n_;
  int m_;
  std::vector<double> lower_, upper_, row_lower_, row_upper_;

  std::vector<double> lo_, hi_, cost_, c_, x_, d_, y_, weight_, dual_weight_;
  std::vector<char> state_;
  std::vector<int> basis_, pos_;
  BasisFactor lu_;
  std::vector<double> alpha_, work_, rhs_;
  std::vector<double> acc_;
  std::vector<char> acc_mark_;
  std::vector<int> touched_;
  std::vector<int> nz_;
  std::vector<int> cand_, cand_at_;
  std::vector<std::pair<int, double>> cands_;
  std::vector<std::size_t> slot_of_, entry_of_slot_, row_split_;
  long iterations_ = 0;
  bool has_basis_ = false;
  bool fresh_ = false;
  bool bland_ = false;
  bool lost_feasibility_ = false;
};

}  // namespace brickstab::lp
