#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace brickstab::lp {

/// Sparse LU factorization of a simplex basis with product-form (eta) updates.
///
/// The basis is an m x m matrix whose columns are addressed by basis
/// position. Factorization is right-looking Gaussian elimination with
/// Markowitz pivot selection and threshold partial pivoting. Column and row
/// singletons fall out of the Markowitz search as zero-cost pivots, so the
/// slack-heavy bases produced by the simplex method factor with little fill.
///
/// ftran() solves B x = a (a indexed by row, x by position).
/// btran() solves y' B = c' (c indexed by position, y by row).
class BasisFactor {
 public:
  /// Positions/rows left unpivoted when the basis is singular.
  struct Singularity {
    std::vector<int> positions;
    std::vector<int> rows;
    bool empty() const { return positions.empty(); }
  };

  double threshold = 0.1;
  double absolute_pivot_tol = 1e-11;
  double drop_tol = 1e-14;
  int search_limit = 4;

  /// `column(pos, rows, values)` must fill the sparse column at a basis position.
  template <class ColumnFn>
  Singularity factorize(int m, ColumnFn&& column) {
    m_ = m;
    reset_storage();
    active_rows_.assign(m, {});
    col_pattern_.assign(m, {});
    std::vector<int> rows;
    std::vector<double> vals;
    for (int pos = 0; pos < m; ++pos) {
      rows.clear();
      vals.clear();
      column(pos, rows, vals);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        if (vals[k] == 0.0) continue;
        active_rows_[rows[k]].push_back({pos, vals[k]});
        col_pattern_[pos].push_back(rows[k]);
      }
    }
    return eliminate();
  }

  int size() const { return m_; }
  int num_updates() const { return static_cast<int>(eta_pos_.size()); }
  std::size_t factor_nonzeros() const { return l_value_.size() + ur_value_.size() + m_; }
  std::size_t eta_nonzeros() const { return eta_value_.size(); }

  /// Solves B x = a. `rhs` (by row) is consumed; `x` receives values by position.
  void ftran(std::vector<double>& rhs, std::vector<double>& x) const {
    x.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      const double v = rhs[pivot_row_[k]];
      if (v == 0.0) continue;
      for (std::size_t e = l_start_[k]; e < l_start_[k + 1]; ++e) rhs[l_index_[e]] -= l_value_[e] * v;
    }
    for (int k = m_ - 1; k >= 0; --k) {
      double v = rhs[pivot_row_[k]];
      if (v == 0.0) continue;
      v /= pivot_value_[k];
      x[pivot_pos_[k]] = v;
      for (std::size_t e = uc_start_[k]; e < uc_start_[k + 1]; ++e) rhs[uc_index_[e]] -= uc_value_[e] * v;
    }
    for (std::size_t t = 0; t < eta_pos_.size(); ++t) {
      const int p = eta_pos_[t];
      if (x[p] == 0.0) continue;
      const double xp = x[p] / eta_pivot_[t];
      x[p] = xp;
      for (std::size_t e = eta_start_[t]; e < eta_start_[t + 1]; ++e) x[eta_index_[e]] -= eta_value_[e] * xp;
    }
  }

  /// Solves y' B = c'. `c` (by position) is consumed; `y` receives values by row.
  void btran(std::vector<double>& c, std::vector<double>& y) const {
    for (std::size_t t = eta_pos_.size(); t-- > 0;) {
      const int p = eta_pos_[t];
      double sum = c[p];
      for (std::size_t e = eta_start_[t]; e < eta_start_[t + 1]; ++e) sum -= eta_value_[e] * c[eta_index_[e]];
      c[p] = sum / eta_pivot_[t];
    }
    y.assign(m_, 0.0);
    for (int k = 0; k < m_; ++k) {
      double v = c[pivot_pos_[k]];
      if (v == 0.0) continue;
      v /= pivot_value_[k];
      y[pivot_row_[k]] = v;
      for (std::size_t e = ur_start_[k]; e < ur_start_[k + 1]; ++e) c[ur_index_[e]] -= ur_value_[e] * v;
    }
    for (int k = m_ - 1; k >= 0; --k) {
      const int r = pivot_row_[k];
      const double v = y[r];
      if (v == 0.0) continue;
      for (std::size_t e = lr_start_[r]; e < lr_start_[r + 1]; ++e) y[lr_index_[e]] -= lr_value_[e] * v;
    }
  }

  /// Records the replacement of the column at `position` by a column whose
  /// ftran image is `alpha` (dense, by position).
  void update(int position, const std::vector<double>& alpha) {
    eta_pos_.push_back(position);
    eta_pivot_.push_back(alpha[position]);
    for (int i = 0; i < m_; ++i) {
      if (i == position || std::abs(alpha[i]) <= drop_tol) continue;
      eta_index_.push_back(i);
      eta_value_.push_back(alpha[i]);
    }
    eta_start_.push_back(eta_index_.size());
  }

  /// As above, with the nonzero positions of `alpha` listed in `nonzeros`.
  void update(int position, const std::vector<double>& alpha, const std::vector<int>& nonzeros) {
    eta_pos_.push_back(position);
    eta_pivot_.push_back(alpha[position]);
    for (int i : nonzeros) {
      if (i == position || std::abs(alpha[i]) <= drop_tol) continue;
      eta_index_.push_back(i);
      eta_value_.push_back(alpha[i]);
    }
    eta_start_.push_back(eta_index_.size());
  }

 private:
  struct Entry {
    int col;
    double value;
  };

  // Intrusive doubly linked lists of indices bucketed by their nonzero count.
  class CountBuckets {
   public:
    void init(int n) {
      head_.assign(n + 2, -1);
      next_.assign(n, -1);
      prev_.assign(n, -1);
      count_.assign(n, -1);
    }
    void insert(int i, int c) {
      count_[i] = c;
      prev_[i] = -1;
      next_[i] = head_[c];
      if (head_[c] >= 0) prev_[head_[c]] = i;
      head_[c] = i;
    }
    void remove(int i) {
      const int c = count_[i];
      if (c < 0) return;
      if (prev_[i] >= 0) next_[prev_[i]] = next_[i];
      else head_[c] = next_[i];
      if (next_[i] >= 0) prev_[next_[i]] = prev_[i];
      count_[i] = -1;
    }
    void set(int i, int c) {
      if (count_[i] == c) return;
      remove(i);
      insert(i, c);
    }
    int first(int c) const { return head_[c]; }
    int next(int i) const { return next_[i]; }
    int count(int i) const { return count_[i]; }

   private:
    std::vector<int> head_, next_, prev_, count_;
  };

  void reset_storage() {
    pivot_row_.clear();
    pivot_pos_.clear();
    pivot_value_.clear();
    l_start_.assign(1, 0);
    l_index_.clear();
    l_value_.clear();
    ur_start_.assign(1, 0);
    ur_index_.clear();
    ur_value_.clear();
    uc_start_.clear();
    uc_index_.clear();
    uc_value_.clear();
    eta_pos_.clear();
    eta_pivot_.clear();
    eta_start_.assign(1, 0);
    eta_index_.clear();
    eta_value_.clear();
  }

  double entry(int row, int col) const {
    for (const Entry& e : active_rows_[row])
      if (e.col == col) return e.value;
    return 0.0;
  }

  double column_max(int col) const {
    double mx = 0.0;
    for (int i : col_pattern_[col]) mx = std::max(mx, std::abs(entry(i, col)));
    return mx;
  }

  static void erase_value(std::vector<int>& v, int x) {
    auto it = std::find(v.begin(), v.end(), x);
    if (it != v.end()) {
      *it = v.back();
      v.pop_back();
    }
  }

  bool find_pivot(int& prow, int& pcol) {
    long best_cost = -1;
    double best_abs = 0.0;
    int searched = 0;
    auto consider = [&](int i, int j, double v, long cost) {
      const double a = std::abs(v);
      if (best_cost < 0 || cost < best_cost || (cost == best_cost && a > best_abs)) {
        best_cost = cost;
        best_abs = a;
        prow = i;
        pcol = j;
      }
    };
    for (int cnt = 1; cnt <= m_; ++cnt) {
      for (int j = col_buckets_.first(cnt); j >= 0; j = col_buckets_.next(j)) {
        const double mx = column_max(j);
        for (int i : col_pattern_[j]) {
          const double v = entry(i, j);
          if (std::abs(v) < threshold * mx || std::abs(v) <= absolute_pivot_tol) continue;
          consider(i, j, v, static_cast<long>(row_buckets_.count(i) - 1) * (cnt - 1));
        }
        ++searched;
        if (best_cost >= 0 && (best_cost <= static_cast<long>(cnt) * (cnt - 1) || searched >= search_limit))
          return true;
      }
      for (int i = row_buckets_.first(cnt); i >= 0; i = row_buckets_.next(i)) {
        for (const Entry& e : active_rows_[i]) {
          const double mx = column_max(e.col);
          if (std::abs(e.value) < threshold * mx || std::abs(e.value) <= absolute_pivot_tol) continue;
          consider(i, e.col, e.value, static_cast<long>(cnt - 1) * (col_buckets_.count(e.col) - 1));
        }
        ++searched;
        if (best_cost >= 0 && (best_cost <= static_cast<long>(cnt) * cnt || searched >= search_limit))
          return true;
      }
    }
    return best_cost >= 0;
  }

  Singularity eliminate() {
    row_buckets_.init(m_);
    col_buckets_.init(m_);
    for (int j = m_ - 1; j >= 0; --j) col_buckets_.insert(j, static_cast<int>(col_pattern_[j].size()));
    for (int i = m_ - 1; i >= 0; --i) row_buckets_.insert(i, static_cast<int>(active_rows_[i].size()));

    std::vector<int> mark(m_, -1);
    std::vector<char> in_pivot_row(m_, 0);
    std::vector<char> row_done(m_, 0), col_done(m_, 0);
    std::vector<int> ur_pos;  // U row entries by basis position, converted below
    std::vector<int> touched_cols;

    for (int step = 0; step < m_; ++step) {
      int r = -1, c = -1;
      if (!find_pivot(r, c)) break;
      const double pv = entry(r, c);
      pivot_row_.push_back(r);
      pivot_pos_.push_back(c);
      pivot_value_.push_back(pv);
      row_done[r] = 1;
      col_done[c] = 1;

      std::vector<Entry> prow = std::move(active_rows_[r]);
      active_rows_[r].clear();
      touched_cols.clear();
      for (const Entry& e : prow) {
        erase_value(col_pattern_[e.col], r);
        if (e.col == c) continue;
        ur_pos.push_back(e.col);
        ur_value_.push_back(e.value);
        touched_cols.push_back(e.col);
      }
      ur_start_.push_back(ur_value_.size());
      for (int j : touched_cols) in_pivot_row[j] = 1;

      std::vector<int> elim_rows = std::move(col_pattern_[c]);
      col_pattern_[c].clear();
      for (int i : elim_rows) {
        auto& row = active_rows_[i];
        double aic = 0.0;
        for (std::size_t k = 0; k < row.size(); ++k) {
          if (row[k].col == c) {
            aic = row[k].value;
            row[k] = row.back();
            row.pop_back();
            break;
          }
        }
        const double l = aic / pv;
        l_index_.push_back(i);
        l_value_.push_back(l);
        for (std::size_t k = 0; k < row.size(); ++k) mark[row[k].col] = static_cast<int>(k);
        for (const Entry& e : prow) {
          if (e.col == c) continue;
          if (mark[e.col] >= 0) {
            row[mark[e.col]].value -= l * e.value;
          } else {
            mark[e.col] = static_cast<int>(row.size());
            row.push_back({e.col, -l * e.value});
            col_pattern_[e.col].push_back(i);
          }
        }
        std::size_t keep = 0;
        for (std::size_t k = 0; k < row.size(); ++k) {
          mark[row[k].col] = -1;
          if (in_pivot_row[row[k].col] && std::abs(row[k].value) <= drop_tol) {
            erase_value(col_pattern_[row[k].col], i);
            continue;
          }
          row[keep++] = row[k];
        }
        row.resize(keep);
        row_buckets_.set(i, static_cast<int>(row.size()));
      }
      l_start_.push_back(l_value_.size());

      row_buckets_.remove(r);
      col_buckets_.remove(c);
      for (int j : touched_cols) {
        in_pivot_row[j] = 0;
        col_buckets_.set(j, static_cast<int>(col_pattern_[j].size()));
      }
    }

    Singularity sing;
    if (static_cast<int>(pivot_row_.size()) < m_) {
      for (int j = 0; j < m_; ++j)
        if (!col_done[j]) sing.positions.push_back(j);
      for (int i = 0; i < m_; ++i)
        if (!row_done[i]) sing.rows.push_back(i);
      return sing;
    }

    // Position-indexed U rows -> pivot-indexed columns for the ftran back solve.
    std::vector<int> pivot_of_pos(m_);
    for (int k = 0; k < m_; ++k) pivot_of_pos[pivot_pos_[k]] = k;
    ur_index_ = std::move(ur_pos);
    std::vector<std::size_t> count(m_ + 1, 0);
    for (int p : ur_index_) ++count[pivot_of_pos[p] + 1];
    uc_start_.assign(m_ + 1, 0);
    for (int k = 0; k < m_; ++k) uc_start_[k + 1] = uc_start_[k] + count[k + 1];
    uc_index_.resize(ur_index_.size());
    uc_value_.resize(ur_index_.size());
    std::vector<std::size_t> next(uc_start_.begin(), uc_start_.end() - 1);
    for (int k = 0; k < m_; ++k) {
      for (std::size_t e = ur_start_[k]; e < ur_start_[k + 1]; ++e) {
        const std::size_t at = next[pivot_of_pos[ur_index_[e]]]++;
        uc_index_[at] = pivot_row_[k];
        uc_value_[at] = ur_value_[e];
      }
    }
    // L by row for the btran forward pass: row i lists (pivot row of k, l_ik).
    lr_start_.assign(m_ + 1, 0);
    for (int i : l_index_) ++lr_start_[i + 1];
    for (int i = 0; i < m_; ++i) lr_start_[i + 1] += lr_start_[i];
    lr_index_.resize(l_index_.size());
    lr_value_.resize(l_index_.size());
    next.assign(lr_start_.begin(), lr_start_.end() - 1);
    for (int k = 0; k < m_; ++k) {
      for (std::size_t e = l_start_[k]; e < l_start_[k + 1]; ++e) {
        const std::size_t at = next[l_index_[e]]++;
        lr_index_[at] = pivot_row_[k];
        lr_value_[at] = l_value_[e];
      }
    }
    active_rows_.clear();
    col_pattern_.clear();
    return sing;
  }

  int m_ = 0;

  std::vector<int> pivot_row_, pivot_pos_;
  std::vector<double> pivot_value_;
  // L: per pivot, multipliers applied to other rows (row index, value).
  std::vector<std::size_t> l_start_;
  std::vector<int> l_index_;
  std::vector<double> l_value_;
  std::vector<std::size_t> lr_start_;
  std::vector<int> lr_index_;
  std::vector<double> lr_value_;
  // U by rows: per pivot, (basis position of later pivot, value).
  std::vector<std::size_t> ur_start_;
  std::vector<int> ur_index_;
  std::vector<double> ur_value_;
  // U by columns: per pivot, (row of earlier pivot, value).
  std::vector<std::size_t> uc_start_;
  std::vector<int> uc_index_;
  std::vector<double> uc_value_;
  // Eta file.
  std::vector<int> eta_pos_;
  std::vector<double> eta_pivot_;
  std::vector<std::size_t> eta_start_;
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;

  std::vector<std::vector<Entry>> active_rows_;
  std::vector<std::vector<int>> col_pattern_;
  CountBuckets row_buckets_, col_buckets_;
};

}  // namespace brickstab::lp
