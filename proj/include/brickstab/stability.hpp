#pragma once

#include <algorithm>
#include <chrono>
#include <string>
#include <vector>

#include "brickstab/assembly.hpp"
#include "brickstab/force_model.hpp"
#include "brickstab/program.hpp"
#include "brickstab/solver.hpp"

namespace brickstab {

enum class Verdict { Stable, Unstable };

inline const char* to_string(Verdict v) { return v == Verdict::Stable ? "STABLE" : "UNSTABLE"; }

struct ScoreThresholds {
  double eps_force = 1e-6;   // newtons
  double eps_torque = 1e-3;  // newton-millimeters
};

struct Timings {
  double build = 0.0;
  double assemble = 0.0;
  double solve = 0.0;
  double total() const { return build + assemble + solve; }
};

struct StabilityReport {
  /// Index 0 unused; brick i at index i.
  std::vector<double> score;
  std::vector<double> d_max;
  std::vector<double> residual_force;
  std::vector<double> residual_torque;
  Verdict verdict = Verdict::Stable;
  std::vector<int> failing_bricks;
  std::vector<int> weakest_bricks;
  double max_residual_force = 0.0;
  double max_residual_torque = 0.0;
  double max_d_max = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  bool complementarity_satisfied = true;
  double objective = 0.0;
  long nodes_explored = 0;
  Timings timings;

  int brick_count() const { return static_cast<int>(score.size()) - 1; }
  double max_score() const {
    return score.size() > 1 ? *std::max_element(score.begin() + 1, score.end()) : 0.0;
  }
};

/// Per-brick scores: 1 on an equilibrium or friction-capacity failure,
/// otherwise the friction utilization d_max / T.
inline StabilityReport score_bricks(const SolveResult& result, const StabilityProgram& prog,
                                    const ScoreThresholds& eps = {}) {
  const double T = prog.weights.capacity_T;
  const int n = prog.num_bricks;
  StabilityReport rep;
  rep.score.assign(n + 1, 0.0);
  rep.d_max = result.d_max;
  rep.residual_force = result.residual_force;
  rep.residual_torque = result.residual_torque;
  rep.status = result.status;
  rep.complementarity_satisfied = result.complementarity_satisfied;
  rep.objective = result.objective;
  rep.nodes_explored = result.nodes_explored;
  rep.timings.solve = result.solve_time;

  for (int i = 1; i <= n; ++i) {
    double friction = 0.0;
    for (int j : prog.drag_columns[i]) friction = std::max(friction, result.x[j]);
    for (int j : prog.pull_columns[i]) friction = std::max(friction, result.x[j]);
    const bool failed = result.residual_force[i] > eps.eps_force || result.residual_torque[i] > eps.eps_torque ||
                        friction > T;
    rep.score[i] = failed ? 1.0 : std::min(result.d_max[i] / T, 1.0);
    if (rep.score[i] >= 1.0) {
      rep.score[i] = 1.0;
      rep.failing_bricks.push_back(i);
    }
    rep.max_residual_force = std::max(rep.max_residual_force, result.residual_force[i]);
    rep.max_residual_torque = std::max(rep.max_residual_torque, result.residual_torque[i]);
    rep.max_d_max = std::max(rep.max_d_max, result.d_max[i]);
  }
  rep.verdict = rep.failing_bricks.empty() ? Verdict::Stable : Verdict::Unstable;
  const double top = rep.max_score();
  for (int i = 1; i <= n; ++i) {
    if (rep.score[i] == top) rep.weakest_bricks.push_back(i);
  }
  return rep;
}

/// Full pipeline: force model, program, solve, scores. Throws ValidationFailed
/// for invalid assemblies.
inline StabilityReport analyze(const Assembly& a, const SolverWeights& weights = {}, const SolveOptions& options = {},
                               const ScoreThresholds& eps = {}) {
  using clock = std::chrono::steady_clock;
  require_valid(a);
  const auto t0 = clock::now();
  const ForceModel model = build_force_model(a, weights.capacity_T);
  const auto t1 = clock::now();
  const StabilityProgram prog = assemble_program(model, weights);
  const auto t2 = clock::now();
  const SolveResult result = solve(prog, options);
  StabilityReport rep = score_bricks(result, prog, eps);
  rep.timings.build = std::chrono::duration<double>(t1 - t0).count();
  rep.timings.assemble = std::chrono::duration<double>(t2 - t1).count();
  return rep;
}

}  // namespace brickstab
