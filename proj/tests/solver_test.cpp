#include <gtest/gtest.h>

#include <random>

#include "brickstab/solver.hpp"
#include "support/brute_force.hpp"
#include "support/random_structures.hpp"
#include "support/small_family.hpp"

namespace brickstab {
namespace {

constexpr double kWeight1x1 = 0.43e-3 * 9.8;

StabilityProgram program_for(const Assembly& a, const SolverWeights& w = {}) {
  return assemble_program(build_force_model(a, w.capacity_T), w);
}

TEST(Solve, FloatingUnitBrick) {
  Assembly a;
  a.add("1x1", {4, 4, 3});
  const SolveResult r = solve(program_for(a));
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_NEAR(r.objective, kWeight1x1, 1e-12);
  EXPECT_NEAR(r.residual_force[1], kWeight1x1, 1e-12);
  EXPECT_NEAR(r.residual_torque[1], 0.0, 1e-12);
}

TEST(Solve, UnitBrickOnBaseplate) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  const StabilityProgram p = program_for(a);
  const SolveResult r = solve(p);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
  EXPECT_EQ(r.d_max[1], 0.0);
  EXPECT_TRUE(check_complementarity(r, p).empty());
}

TEST(Solve, EmptyProgram) {
  const SolveResult r = solve(program_for(Assembly{}));
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_EQ(r.objective, 0.0);
  EXPECT_TRUE(r.x.empty());
}

TEST(Solve, TwoBrickTowerPressSumsToUpperWeight) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  a.add("1x1", {0, 0, 1});
  const ForceModel m = build_force_model(a);
  const SolveResult r = solve(assemble_program(m));
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  double press = 0.0;
  for (const ForceCandidate& c : m.candidates)
    if (c.kind == ForceKind::P && c.brick == 1) press += r.force_values[c.variable_id];
  EXPECT_NEAR(press, kWeight1x1, 1e-12);
  const auto oracle = testing_support::brute_force(m);
  EXPECT_NEAR(r.objective, oracle.objective, 1e-12);
}

TEST(Solve, RejectsInvalidOptions) {
  SolveOptions o;
  o.max_branch_nodes = 0;
  EXPECT_THROW(solve(program_for(Assembly{}), o), std::invalid_argument);
}

TEST(CheckComplementarity, Examples) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  const StabilityProgram p = program_for(a);
  std::vector<double> x(p.num_vars(), 0.0);
  EXPECT_TRUE(check_complementarity(std::span<const double>(x), p, 1e-9).empty());
  const auto [s, d] = p.complementarity_pairs[1];
  x[s] = 0.5;
  x[d] = 0.5;
  const auto [s2, d2] = p.complementarity_pairs[3];
  x[s2] = 1.0;
  x[d2] = 1.0;
  const auto v = check_complementarity(std::span<const double>(x), p, 1e-9);
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].pair, 3);
  EXPECT_DOUBLE_EQ(v[0].product, 1.0);
  EXPECT_EQ(v[1].pair, 1);
  EXPECT_DOUBLE_EQ(v[1].product, 0.25);
}

// A 1x2 on a frictionless floor with its four corner supports paired across
// the brick, so a complementary point cannot hold both ends up.
ForceModel crossed_bar() {
  Assembly a;
  a.ground_knobs = false;
  a.add("1x2", {0, 0, 0});
  ForceModel m = build_force_model(a);
  m.complementarity_pairs = {{0, 1}, {0, 3}, {2, 1}, {2, 3}};
  return m;
}

StabilityProgram crossed_bar_program() {
  ForceModel m = crossed_bar();
  const auto pairs = m.complementarity_pairs;
  m.complementarity_pairs.clear();
  StabilityProgram p = assemble_program(m);
  p.complementarity_pairs = pairs;
  return p;
}

TEST(BranchAndBound, BranchesWhenTheRelaxationViolatesEveryPair) {
  const StabilityProgram p = crossed_bar_program();
  SolveOptions o;
  o.pair_reduction = false;
  const SolveResult r = solve(p, o);
  EXPECT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_GT(r.nodes_explored, 1);
  EXPECT_NEAR(r.relaxation_objective, 0.0, 1e-12);
  EXPECT_GT(r.objective, 1e-3);
  EXPECT_TRUE(r.complementarity_satisfied);
  EXPECT_TRUE(check_complementarity(r, p, o.complementarity_tol).empty());
  const auto oracle = testing_support::brute_force(crossed_bar());
  EXPECT_NEAR(r.objective, oracle.objective, 1e-9);
}

TEST(BranchAndBound, NodeLimitStillReturnsForces) {
  const StabilityProgram p = crossed_bar_program();
  SolveOptions o;
  o.pair_reduction = false;
  o.max_branch_nodes = 1;
  const SolveResult r = solve(p, o);
  ASSERT_EQ(r.status, SolveStatus::NodeLimit);
  EXPECT_EQ(r.x.size(), static_cast<std::size_t>(p.num_vars()));
  EXPECT_FALSE(r.complementarity_satisfied);
  EXPECT_EQ(r.nodes_explored, 1);
}

class OracleFamily : public ::testing::TestWithParam<int> {};

TEST_P(OracleFamily, MatchesBruteForce) {
  static const auto family = testing_support::small_family();
  for (std::size_t k = GetParam(); k < family.size(); k += 8) {
    const auto& [name, a] = family[k];
    const ForceModel m = build_force_model(a);
    const SolveResult r = solve(assemble_program(m));
    const auto oracle = testing_support::brute_force(m);
    ASSERT_EQ(r.status, SolveStatus::Optimal) << name;
    EXPECT_NEAR(r.objective, oracle.objective, 1e-9) << name;
    for (int i = 1; i <= a.size(); ++i) {
      EXPECT_NEAR(r.d_max[i], oracle.d_max[i], 1e-6) << name << " brick " << i;
      EXPECT_NEAR(r.residual_force[i], oracle.res_force[i], 1e-6) << name << " brick " << i;
      EXPECT_NEAR(r.residual_torque[i], oracle.res_torque[i], 1e-3) << name << " brick " << i;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Slices, OracleFamily, ::testing::Range(0, 8));

class SolverProperties : public ::testing::TestWithParam<int> {};

TEST_P(SolverProperties, Deterministic) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams params;
  params.floating = 1;
  const Assembly a = testing_support::random_layout(rng, params);
  const StabilityProgram p = program_for(a);
  const SolveResult r1 = solve(p), r2 = solve(p);
  EXPECT_EQ(r1.x, r2.x);
  EXPECT_EQ(r1.objective, r2.objective);
  EXPECT_EQ(r1.nodes_explored, r2.nodes_explored);
}

TEST_P(SolverProperties, OptimalSatisfiesComplementarityAndBounds) {
  std::mt19937_64 rng(GetParam());
  const Assembly a = testing_support::random_layout(rng, {});
  const StabilityProgram p = program_for(a);
  const SolveOptions o;
  const SolveResult r = solve(p, o);
  ASSERT_EQ(r.status, SolveStatus::Optimal);
  EXPECT_TRUE(check_complementarity(r, p, o.complementarity_tol).empty());
  for (double v : r.force_values) EXPECT_GE(v, -o.feasibility_tol);
  EXPECT_LE(r.relaxation_objective, r.objective + 1e-12);
}

TEST_P(SolverProperties, MassScaleCovariance) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams params;
  params.ground_knobs = false;
  const Assembly a = testing_support::random_layout(rng, params);
  const double k = 3.0;
  Catalog scaled;
  for (BrickType t : a.catalog.types()) {
    t.mass_kg *= k;
    scaled.add(t);
  }
  Assembly b = a;
  b.catalog = scaled;
  for (auto& brick : b.bricks) brick.extra_mass_kg *= k;
  const SolveResult ra = solve(program_for(a));
  const SolveResult rb = solve(program_for(b));
  ASSERT_EQ(ra.force_values.size(), rb.force_values.size());
  for (std::size_t v = 0; v < ra.force_values.size(); ++v) {
    EXPECT_NEAR(rb.force_values[v], k * ra.force_values[v], 1e-9);
    EXPECT_EQ(ra.force_values[v] > 1e-12, rb.force_values[v] > 1e-12) << v;
  }
  for (int i = 1; i <= a.size(); ++i) {
    EXPECT_NEAR(rb.residual_force[i], k * ra.residual_force[i], 1e-9);
    EXPECT_NEAR(rb.d_max[i], k * ra.d_max[i], 1e-9);
  }
}

TEST_P(SolverProperties, TranslationInvariance) {
  std::mt19937_64 rng(GetParam());
  const Assembly a = testing_support::random_layout(rng, {});
  const Assembly b = testing_support::translate(a, 4, 7);
  const SolveResult ra = solve(program_for(a));
  const SolveResult rb = solve(program_for(b));
  ASSERT_EQ(ra.force_values.size(), rb.force_values.size());
  for (std::size_t v = 0; v < ra.force_values.size(); ++v) EXPECT_NEAR(ra.force_values[v], rb.force_values[v], 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Random, SolverProperties, ::testing::Range(1, 21));

}  // namespace
}  // namespace brickstab
