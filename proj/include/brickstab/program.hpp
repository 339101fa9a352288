#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "brickstab/force_model.hpp"
#include "brickstab/lp/problem.hpp"

namespace brickstab {

struct SolverWeights {
  double alpha = 1e-3;
  double beta = 1e-6;
  double capacity_T = 0.98;  // newtons
  /// Brick i's d_max cost is alpha * (1 + tie_break * i / n), which picks one
  /// optimum when several loadings of equal total drag exist.
  double tie_break = 1e-4;

  bool valid() const { return alpha > 0 && beta >= 0 && capacity_T > 0 && tie_break >= 0 && tie_break < 1; }
};

/// Residual components: net force along X, Y, Z, then net torque about X, Y, Z.
inline constexpr int kComponents = 6;
inline constexpr const char* kComponentNames[kComponents] = {"fx", "fy", "fz", "tx", "ty", "tz"};

enum class ColumnRole { Force, ResidualPlus, ResidualMinus, DMax };
enum class RowRole { Equilibrium, DMax };

struct ColumnInfo {
  ColumnRole role = ColumnRole::Force;
  int brick = 0;      // owning brick; for forces, ForceVariable::brick
  int component = -1; // residual columns only
  ForceKind kind = ForceKind::S;  // force columns only
};

struct RowInfo {
  RowRole role = RowRole::Equilibrium;
  int brick = 0;
  int component = -1;      // equilibrium rows only
  int force_column = -1;   // dmax rows: the D column bounded by this row
};

/// The equilibrium optimization as a sparse LP plus the pairs that must not
/// both be nonzero. Columns [0, num_force_vars) are the force magnitudes.
struct StabilityProgram {
  lp::Problem problem;
  int num_force_vars = 0;
  int num_bricks = 0;
  SolverWeights weights;
  double pitch = 8.0;
  std::vector<std::pair<int, int>> complementarity_pairs;
  std::vector<ColumnInfo> columns;
  std::vector<RowInfo> rows;
  /// equilibrium_row[i][c], residual_column[i][c] = {plus, minus}; index 0 unused.
  std::vector<std::array<int, kComponents>> equilibrium_row;
  std::vector<std::array<std::array<int, 2>, kComponents>> residual_column;
  std::vector<int> dmax_column;
  /// D-kind force columns whose owning (upper) brick is i, and U-kind ones on brick i.
  std::vector<std::vector<int>> drag_columns;
  std::vector<std::vector<int>> pull_columns;
  /// Force terms (column, coefficient) of each equilibrium row; empty for other rows.
  std::vector<std::vector<std::pair<int, double>>> equilibrium_terms;

  int num_vars() const { return problem.num_cols(); }

  /// Signed residual of brick i's component c at x (torque components in N*mm).
  double residual(std::span<const double> x, int brick, int c) const {
    const int r = equilibrium_row[brick][c];
    double v = -problem.row_lower[r];
    for (const auto& [col, coef] : equilibrium_terms[r]) v += coef * x[col];
    return c >= 3 ? v * pitch : v;
  }

  /// L1 norm of brick i's force residual (newtons) and torque residual (N*mm).
  std::pair<double, double> residual_norms(std::span<const double> x, int brick) const {
    double f = 0.0, t = 0.0;
    for (int c = 0; c < 3; ++c) f += std::abs(residual(x, brick, c));
    for (int c = 3; c < kComponents; ++c) t += std::abs(residual(x, brick, c));
    return {f, t};
  }
};

namespace detail {

inline bool same_point(Vec3 a, Vec3 b) { return a == b; }

inline void check_model(const ForceModel& m) {
  for (const ForceVariable& v : m.variables) {
    if (v.candidates.size() == 2) {
      const ForceCandidate& a = m.candidates[v.candidates[0]];
      const ForceCandidate& b = m.candidates[v.candidates[1]];
      if (!same_point(a.application_point, b.application_point) || !(a.direction == -b.direction)) {
        throw std::invalid_argument("force model pairs mismatched candidates for variable " + std::to_string(v.id));
      }
    }
  }
  for (const auto& [s, d] : m.complementarity_pairs) {
    const ForceVariable& vs = m.variables.at(s);
    const ForceVariable& vd = m.variables.at(d);
    const ForceCandidate& cs = m.candidates[vs.candidates[0]];
    const ForceCandidate& cd = m.candidates[vd.candidates[0]];
    if (vs.kind != ForceKind::S || vd.kind != ForceKind::D || vs.brick != vd.brick ||
        vs.partner_brick != vd.partner_brick || !same_point(cs.application_point, cd.application_point)) {
      throw std::invalid_argument("complementarity pair (" + std::to_string(s) + ", " + std::to_string(d) +
                                  ") is not a co-located support/drag pair");
    }
  }
}

}  // namespace detail

inline StabilityProgram assemble_program(const ForceModel& model, const SolverWeights& weights = {}) {
  if (!weights.valid()) throw std::invalid_argument("solver weights must satisfy alpha > 0, beta >= 0, T > 0");
  detail::check_model(model);

  StabilityProgram prog;
  prog.weights = weights;
  prog.pitch = model.pitch;
  prog.num_bricks = model.brick_count();
  prog.num_force_vars = model.variable_count();
  prog.complementarity_pairs = model.complementarity_pairs;
  const int n = prog.num_bricks;

  lp::ProblemBuilder b;
  for (const ForceVariable& v : model.variables) {
    b.add_column(v.kind == ForceKind::D ? weights.beta : 0.0);
    prog.columns.push_back({ColumnRole::Force, v.brick, -1, v.kind});
  }
  prog.equilibrium_row.resize(n + 1);
  prog.residual_column.resize(n + 1);
  prog.dmax_column.assign(n + 1, -1);
  prog.drag_columns.resize(n + 1);
  prog.pull_columns.resize(n + 1);

  for (int i = 1; i <= n; ++i) {
    const Vec3 g = model.gravity_load[i];
    for (int c = 0; c < kComponents; ++c) {
      // force part + gravity = r+ - r-, i.e. force part - r+ + r- = -gravity
      const double rhs = c < 3 ? -g[c] : 0.0;
      const int row = b.add_row(rhs, rhs);
      prog.rows.push_back({RowRole::Equilibrium, i, c, -1});
      prog.equilibrium_row[i][c] = row;
      const int plus = b.add_column(1.0);
      const int minus = b.add_column(1.0);
      prog.columns.push_back({ColumnRole::ResidualPlus, i, c, ForceKind::S});
      prog.columns.push_back({ColumnRole::ResidualMinus, i, c, ForceKind::S});
      prog.residual_column[i][c] = {plus, minus};
      b.add_entry(row, plus, -1.0);
      b.add_entry(row, minus, 1.0);
    }
    const bool has_drag = !model.of(i, ForceKind::D).empty();
    const double dmax_cost = weights.alpha * (1.0 + weights.tie_break * i / n);
    prog.dmax_column[i] = b.add_column(dmax_cost, 0.0, has_drag ? lp::kInfinity : 0.0);
    prog.columns.push_back({ColumnRole::DMax, i, -1, ForceKind::S});
  }

  prog.equilibrium_terms.resize(b.num_rows());
  for (const ForceCandidate& f : model.candidates) {
    const Vec3 torque = (1.0 / model.pitch) * cross(f.lever, f.direction);
    const auto& row = prog.equilibrium_row[f.brick];
    for (int c = 0; c < 3; ++c) {
      if (f.direction[c] != 0.0) {
        b.add_entry(row[c], f.variable_id, f.direction[c]);
        prog.equilibrium_terms[row[c]].push_back({f.variable_id, f.direction[c]});
      }
      if (torque[c] != 0.0) {
        b.add_entry(row[3 + c], f.variable_id, torque[c]);
        prog.equilibrium_terms[row[3 + c]].push_back({f.variable_id, torque[c]});
      }
    }
    if (f.kind == ForceKind::D) prog.drag_columns[f.brick].push_back(f.variable_id);
    if (f.kind == ForceKind::U) prog.pull_columns[f.brick].push_back(f.variable_id);
  }

  for (int i = 1; i <= n; ++i) {
    for (int col : prog.drag_columns[i]) {
      const int row = b.add_row(0.0, lp::kInfinity);
      prog.rows.push_back({RowRole::DMax, i, -1, col});
      b.add_entry(row, prog.dmax_column[i], 1.0);
      b.add_entry(row, col, -1.0);
    }
  }
  prog.equilibrium_terms.resize(b.num_rows());
  prog.problem = std::move(b).build();
  return prog;
}

/// Writes the program in CPLEX LP text format.
inline void write_lp_format(std::ostream& os, const StabilityProgram& prog) {
  const lp::Problem& p = prog.problem;
  auto name = [&](int j) {
    const ColumnInfo& c = prog.columns[j];
    switch (c.role) {
      case ColumnRole::Force: return "f" + std::to_string(j) + "_" + to_string(c.kind) + std::to_string(c.brick);
      case ColumnRole::ResidualPlus: return std::string("rp_") + kComponentNames[c.component] + "_" + std::to_string(c.brick);
      case ColumnRole::ResidualMinus: return std::string("rm_") + kComponentNames[c.component] + "_" + std::to_string(c.brick);
      case ColumnRole::DMax: return "dmax_" + std::to_string(c.brick);
    }
    return "x" + std::to_string(j);
  };
  auto number = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };

  std::vector<std::vector<std::pair<int, double>>> by_row(p.num_rows());
  for (int j = 0; j < p.num_cols(); ++j) {
    auto rows = p.column_rows(j);
    auto vals = p.column_values(j);
    for (std::size_t k = 0; k < rows.size(); ++k) by_row[rows[k]].push_back({j, vals[k]});
  }

  os << "\\ brick equilibrium program: " << prog.num_bricks << " bricks, " << prog.num_force_vars
     << " force variables, " << prog.complementarity_pairs.size() << " complementarity pairs\n";
  os << "Minimize\n obj:";
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.cost[j] != 0.0) os << (p.cost[j] < 0 ? " - " : " + ") << number(std::abs(p.cost[j])) << ' ' << name(j);
  }
  os << "\nSubject To\n";
  for (int r = 0; r < p.num_rows(); ++r) {
    const RowInfo& info = prog.rows[r];
    os << ' ' << (info.role == RowRole::Equilibrium ? std::string("eq_") + kComponentNames[info.component] + "_"
                                                    : std::string("dmax_") + std::to_string(info.force_column) + "_")
       << info.brick << ':';
    for (const auto& [j, v] : by_row[r]) os << (v < 0 ? " - " : " + ") << number(std::abs(v)) << ' ' << name(j);
    if (p.row_lower[r] == p.row_upper[r])
      os << " = " << number(p.row_lower[r]) << '\n';
    else
      os << " >= " << number(p.row_lower[r]) << '\n';
  }
  os << "Bounds\n";
  for (int j = 0; j < p.num_cols(); ++j) {
    if (p.col_upper[j] == 0.0) os << ' ' << name(j) << " = 0\n";
  }
  if (!prog.complementarity_pairs.empty()) {
    os << "\\ complementarity pairs (support, drag):\n";
    for (const auto& [s, d] : prog.complementarity_pairs) os << "\\   " << name(s) << ' ' << name(d) << '\n';
  }
  os << "End\n";
}

}  // namespace brickstab
