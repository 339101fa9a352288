#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "brickstab/lp/simplex.hpp"
#include "brickstab/program.hpp"

namespace brickstab {

struct SolveOptions {
  double feasibility_tol = 1e-9;      // newtons
  double complementarity_tol = 1e-9;  // newtons squared
  long max_branch_nodes = 10000;
  double time_limit = 60.0;  // seconds
  /// Try to repair each relaxation point by lowering both members of a
  /// violated pair by their minimum before branching on it.
  bool pair_reduction = true;

  bool valid() const {
    return feasibility_tol > 0 && complementarity_tol > 0 && max_branch_nodes > 0 && time_limit > 0;
  }
};

enum class SolveStatus { Optimal, NodeLimit, TimeLimit };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "OPTIMAL";
    case SolveStatus::NodeLimit: return "NODE_LIMIT";
    case SolveStatus::TimeLimit: return "TIME_LIMIT";
  }
  return "UNKNOWN";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  /// False only when a limit was hit before any complementary point was found.
  bool complementarity_satisfied = true;
  std::vector<double> x;             // every program column
  std::vector<double> force_values;  // indexed by variable_id
  double objective = 0.0;
  double relaxation_objective = 0.0;
  /// Index 0 unused. L1 residual norms: newtons, newton-millimeters.
  std::vector<double> residual_force;
  std::vector<double> residual_torque;
  std::vector<double> d_max;
  double solve_time = 0.0;
  long nodes_explored = 0;
  long lp_iterations = 0;
};

struct PairViolation {
  int pair = 0;  // index into StabilityProgram::complementarity_pairs
  int support_var = 0;
  int drag_var = 0;
  double product = 0.0;
};

/// Pairs whose value product exceeds tol, largest product first.
inline std::vector<PairViolation> check_complementarity(std::span<const double> x, const StabilityProgram& prog,
                                                        double tol) {
  std::vector<PairViolation> out;
  for (std::size_t k = 0; k < prog.complementarity_pairs.size(); ++k) {
    const auto [s, d] = prog.complementarity_pairs[k];
    const double product = x[s] * x[d];
    if (product > tol) out.push_back({static_cast<int>(k), s, d, product});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PairViolation& a, const PairViolation& b) { return a.product > b.product; });
  return out;
}

inline std::vector<PairViolation> check_complementarity(const SolveResult& r, const StabilityProgram& prog,
                                                        double tol = 1e-9) {
  return check_complementarity(std::span<const double>(r.x), prog, tol);
}

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const StabilityProgram& prog, const SolveOptions& opt)
      : prog_(prog), opt_(opt), start_(std::chrono::steady_clock::now()) {
    deadline_ = start_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                             std::chrono::duration<double>(opt.time_limit));
    lp::SimplexOptions so;
    so.deadline = deadline_;
    simplex_.emplace(prog.problem, so);
  }

  SolveResult run() {
    SolveResult r;
    std::priority_queue<Node> open;
    open.push({0.0, 0, {}});
    std::uint64_t sequence = 1;
    bool have_root = false;
    std::vector<double> root_x;
    SolveStatus status = SolveStatus::Optimal;

    while (!open.empty()) {
      if (have_incumbent_ && open.top().bound >= incumbent_obj_ - opt_.feasibility_tol) break;
      if (std::chrono::steady_clock::now() >= deadline_) {
        status = SolveStatus::TimeLimit;
        break;
      }
      if (r.nodes_explored >= opt_.max_branch_nodes) {
        status = SolveStatus::NodeLimit;
        break;
      }
      Node node = open.top();
      open.pop();
      ++r.nodes_explored;

      lp::Solution sol = solve_node(node.fixed);
      r.lp_iterations += sol.iterations;
      if (sol.status == lp::Status::TimeLimit) {
        if (!have_root) root_x = std::move(sol.x);
        status = SolveStatus::TimeLimit;
        break;
      }
      if (sol.status == lp::Status::Infeasible) continue;
      if (sol.status != lp::Status::Optimal) {
        throw std::runtime_error(std::string("LP relaxation failed: ") + lp::to_string(sol.status));
      }
      if (!have_root) {
        have_root = true;
        r.relaxation_objective = sol.objective;
        root_x = sol.x;
      }
      if (have_incumbent_ && sol.objective >= incumbent_obj_ - opt_.feasibility_tol) continue;

      std::vector<double> x = std::move(sol.x);
      if (opt_.pair_reduction) reduce_pairs(x);
      const int branch = pick_branch(x);
      if (branch < 0) {
        offer(std::move(x));
        continue;
      }
      const auto [s, d] = prog_.complementarity_pairs[branch];
      for (int side : {d, s}) {
        Node child{sol.objective, sequence++, node.fixed};
        child.fixed.push_back(side);
        open.push(std::move(child));
      }
    }

    r.status = status;
    if (have_incumbent_) {
      r.x = std::move(incumbent_);
    } else {
      r.complementarity_satisfied = false;
      r.x = root_x.empty() ? std::vector<double>(prog_.num_vars(), 0.0) : std::move(root_x);
    }
    if (!have_root) r.relaxation_objective = prog_.problem.objective(r.x);
    r.objective = prog_.problem.objective(r.x);
    r.solve_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return r;
  }

 private:
  struct Node {
    double bound;
    std::uint64_t sequence;
    std::vector<int> fixed;  // columns fixed to zero

    // Lowest bound first, then first created.
    bool operator<(const Node& o) const {
      if (bound != o.bound) return bound > o.bound;
      return sequence > o.sequence;
    }
  };

  lp::Solution solve_node(const std::vector<int>& fixed) {
    const lp::Problem& p = prog_.problem;
    for (int j : last_fixed_) simplex_->set_column_bounds(j, p.col_lower[j], p.col_upper[j]);
    for (int j : fixed) simplex_->set_column_bounds(j, 0.0, 0.0);
    last_fixed_ = fixed;
    return simplex_->solve();
  }

  /// Pair with the largest product above the complementarity tolerance;
  /// ties go to the lowest variable id.
  int pick_branch(std::span<const double> x) const {
    int best = -1;
    double best_product = opt_.complementarity_tol;
    for (std::size_t k = 0; k < prog_.complementarity_pairs.size(); ++k) {
      const auto [s, d] = prog_.complementarity_pairs[k];
      const double product = x[s] * x[d];
      if (product > best_product) {
        best = static_cast<int>(k);
        best_product = product;
      }
    }
    return best;
  }

  /// Each pair's members enter every equilibrium row with opposite coefficients,
  /// so subtracting their minimum from both keeps the rows satisfied.
  void reduce_pairs(std::vector<double>& x) const {
    bool changed = false;
    for (const auto& [s, d] : prog_.complementarity_pairs) {
      const double m = std::min(x[s], x[d]);
      if (m > 0.0) {
        x[s] -= m;
        x[d] -= m;
        changed = true;
      }
    }
    if (!changed) return;
    for (int i = 1; i <= prog_.num_bricks; ++i) {
      const int col = prog_.dmax_column[i];
      if (prog_.problem.col_upper[col] == 0.0) continue;
      double m = 0.0;
      for (int j : prog_.drag_columns[i]) m = std::max(m, x[j]);
      x[col] = m;
    }
  }

  void offer(std::vector<double> x) {
    if (!rows_satisfied(x)) return;
    const double obj = prog_.problem.objective(x);
    if (have_incumbent_ && obj >= incumbent_obj_) return;
    have_incumbent_ = true;
    incumbent_obj_ = obj;
    incumbent_ = std::move(x);
  }

  bool rows_satisfied(std::span<const double> x) const {
    const lp::Problem& p = prog_.problem;
    const std::vector<double> act = p.row_activity(x);
    for (int i = 0; i < p.num_rows(); ++i) {
      const double tol = opt_.feasibility_tol * (1.0 + std::abs(p.row_lower[i]));
      if (act[i] < p.row_lower[i] - tol || act[i] > p.row_upper[i] + tol) return false;
    }
    return true;
  }

  const StabilityProgram& prog_;
  SolveOptions opt_;
  std::chrono::steady_clock::time_point start_;
  std::chrono::steady_clock::time_point deadline_;
  std::optional<lp::Simplex> simplex_;
  std::vector<int> last_fixed_;
  bool have_incumbent_ = false;
  double incumbent_obj_ = 0.0;
  std::vector<double> incumbent_;
};

}  // namespace detail

/// Solves the program with complementarity enforced by branch and bound over
/// pair fixings (best bound first, drag side first).
inline SolveResult solve(const StabilityProgram& prog, const SolveOptions& options = {}) {
  if (!options.valid()) throw std::invalid_argument("solve options must be positive");
  SolveResult r;
  if (prog.num_vars() == 0) {
    r.residual_force.assign(prog.num_bricks + 1, 0.0);
    r.residual_torque.assign(prog.num_bricks + 1, 0.0);
    r.d_max.assign(prog.num_bricks + 1, 0.0);
    return r;
  }
  r = detail::BranchAndBound(prog, options).run();
  for (double& v : r.x) v = std::max(v, 0.0);
  r.force_values.assign(r.x.begin(), r.x.begin() + prog.num_force_vars);
  r.residual_force.assign(prog.num_bricks + 1, 0.0);
  r.residual_torque.assign(prog.num_bricks + 1, 0.0);
  r.d_max.assign(prog.num_bricks + 1, 0.0);
  for (int i = 1; i <= prog.num_bricks; ++i) {
    std::tie(r.residual_force[i], r.residual_torque[i]) = prog.residual_norms(r.x, i);
    for (int j : prog.drag_columns[i]) r.d_max[i] = std::max(r.d_max[i], r.x[j]);
  }
  return r;
}

}  // namespace brickstab
