#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace brickstab::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Sparse linear program
///
///     minimize    cost' x
///     subject to  row_lower <= A x <= row_upper
///                 col_lower <=   x <= col_upper
///
/// A is stored column-wise (CSC). Equality rows have row_lower == row_upper.
struct Problem {
  std::vector<double> cost;
  std::vector<double> col_lower;
  std::vector<double> col_upper;
  std::vector<double> row_lower;
  std::vector<double> row_upper;

  std::vector<std::size_t> col_start{0};
  std::vector<int> row_index;
  std::vector<double> value;

  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(row_lower.size()); }
  std::size_t num_nonzeros() const { return value.size(); }

  std::span<const int> column_rows(int j) const {
    return {row_index.data() + col_start[j], col_start[j + 1] - col_start[j]};
  }
  std::span<const double> column_values(int j) const {
    return {value.data() + col_start[j], col_start[j + 1] - col_start[j]};
  }

  double objective(std::span<const double> x) const {
    double sum = 0.0;
    for (int j = 0; j < num_cols(); ++j) sum += cost[j] * x[j];
    return sum;
  }

  std::vector<double> row_activity(std::span<const double> x) const {
    std::vector<double> activity(num_rows(), 0.0);
    for (int j = 0; j < num_cols(); ++j) {
      if (x[j] == 0.0) continue;
      auto rows = column_rows(j);
      auto vals = column_values(j);
      for (std::size_t k = 0; k < rows.size(); ++k) activity[rows[k]] += vals[k] * x[j];
    }
    return activity;
  }
};

/// Row-major copy of a problem's constraint matrix, used for pivot-row pricing.
struct RowMatrix {
  std::vector<std::size_t> row_start;
  std::vector<int> col_index;
  std::vector<double> value;

  explicit RowMatrix(const Problem& p) {
    const int m = p.num_rows();
    row_start.assign(m + 1, 0);
    for (int i : p.row_index) ++row_start[i + 1];
    std::partial_sum(row_start.begin(), row_start.end(), row_start.begin());
    col_index.resize(p.num_nonzeros());
    value.resize(p.num_nonzeros());
    std::vector<std::size_t> next(row_start.begin(), row_start.end() - 1);
    for (int j = 0; j < p.num_cols(); ++j) {
      auto rows = p.column_rows(j);
      auto vals = p.column_values(j);
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t at = next[rows[k]]++;
        col_index[at] = j;
        value[at] = vals[k];
      }
    }
  }
};

/// Incremental construction of a Problem from columns, rows, and triplets.
/// Duplicate (row, col) entries are summed; exact zeros are dropped.
class ProblemBuilder {
 public:
  int add_column(double cost, double lower = 0.0, double upper = kInfinity) {
    if (lower > upper) throw std::invalid_argument("column lower bound exceeds upper bound");
    problem_.cost.push_back(cost);
    problem_.col_lower.push_back(lower);
    problem_.col_upper.push_back(upper);
    return problem_.num_cols() - 1;
  }

  int add_row(double lower, double upper) {
    if (lower > upper) throw std::invalid_argument("row lower bound exceeds upper bound");
    problem_.row_lower.push_back(lower);
    problem_.row_upper.push_back(upper);
    return problem_.num_rows() - 1;
  }

  void add_entry(int row, int col, double v) {
    if (row < 0 || row >= problem_.num_rows() || col < 0 || col >= problem_.num_cols()) {
      throw std::out_of_range("matrix entry outside the declared rows/columns");
    }
    if (v != 0.0) triplets_.push_back({col, row, v});
  }

  void set_row_bounds(int row, double lower, double upper) {
    problem_.row_lower.at(row) = lower;
    problem_.row_upper.at(row) = upper;
  }

  int num_rows() const { return problem_.num_rows(); }
  int num_cols() const { return problem_.num_cols(); }

  Problem build() && {
    std::sort(triplets_.begin(), triplets_.end(), [](const Triplet& a, const Triplet& b) {
      return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    Problem p = std::move(problem_);
    const int n = p.num_cols();
    p.col_start.assign(n + 1, 0);
    p.row_index.clear();
    p.value.clear();
    std::size_t k = 0;
    for (int j = 0; j < n; ++j) {
      while (k < triplets_.size() && triplets_[k].col == j) {
        const int row = triplets_[k].row;
        double sum = 0.0;
        while (k < triplets_.size() && triplets_[k].col == j && triplets_[k].row == row) {
          sum += triplets_[k].value;
          ++k;
        }
        if (sum != 0.0) {
          p.row_index.push_back(row);
          p.value.push_back(sum);
        }
      }
      p.col_start[j + 1] = p.row_index.size();
    }
    return p;
  }

 private:
  struct Triplet {
    int col;
    int row;
    double value;
  };

  Problem problem_;
  std::vector<Triplet> triplets_;
};

}  // namespace brickstab::lp
