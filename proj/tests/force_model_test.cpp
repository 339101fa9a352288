#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <tuple>

#include "brickstab/force_model.hpp"
#include "support/random_structures.hpp"

namespace brickstab {
namespace {

constexpr double kEps = 1e-12;

void expect_vec(Vec3 got, Vec3 want) {
  EXPECT_NEAR(got.x, want.x, kEps);
  EXPECT_NEAR(got.y, want.y, kEps);
  EXPECT_NEAR(got.z, want.z, kEps);
}

std::size_t count(const ForceModel& m, int brick, ForceKind k) { return m.of(brick, k).size(); }

TEST(ContactPoints, FourContactsAtCompassPoints) {
  const Connection c{kGround, 1, {0, 0, 0}, 4};
  const Footprint upper{0, 0, 1, 1, 1};
  const auto pts = contact_points(c, UnitGeometry{}, upper);
  ASSERT_EQ(pts.size(), 4u);
  expect_vec(pts[0], {6.4, 4, 9.6});
  expect_vec(pts[1], {1.6, 4, 9.6});
  expect_vec(pts[2], {4, 6.4, 9.6});
  expect_vec(pts[3], {4, 1.6, 9.6});
}

TEST(ContactPoints, ThreeContactsDropInteriorFacingPoint) {
  // Cell on the -X border of a 2x4 brick lying along X: the +X point faces the interior.
  const Footprint upper{0, 0, 4, 2, 1};
  const Connection c{1, 2, {0, 0, 0}, 3};
  const auto pts = contact_points(c, UnitGeometry{}, upper);
  ASSERT_EQ(pts.size(), 3u);
  for (const Vec3& p : pts) EXPECT_FALSE(std::abs(p.x - 6.4) < kEps && std::abs(p.y - 4) < kEps);
  expect_vec(pts[0], {1.6, 4, 9.6});

  // The +X border cell drops the -X point.
  const Connection e{1, 2, {3, 1, 0}, 3};
  const auto pe = contact_points(e, UnitGeometry{}, upper);
  ASSERT_EQ(pe.size(), 3u);
  for (const Vec3& p : pe) EXPECT_FALSE(std::abs(p.x - (3 * 8 + 1.6)) < kEps && std::abs(p.y - 12) < kEps);
}

TEST(ContactPoints, ThreeContactsOnYBorderOfLongBrick) {
  // 3x4 brick along X: cell (1, 0) is on the -Y border, center lies in +Y.
  const Footprint upper{0, 0, 4, 3, 1};
  const Connection c{1, 2, {1, 0, 0}, 3};
  const auto pts = contact_points(c, UnitGeometry{}, upper);
  ASSERT_EQ(pts.size(), 3u);
  for (const Vec3& p : pts) EXPECT_FALSE(std::abs(p.y - (4 + 2.4)) < kEps);
}

TEST(ContactPoints, AlwaysOnKnobCircle) {
  const Footprint upper{0, 0, 2, 2, 3};
  for (int count : {3, 4}) {
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) {
        const Connection c{1, 2, {x, y, 2}, count};
        const auto pts = contact_points(c, UnitGeometry{}, upper);
        EXPECT_EQ(static_cast<int>(pts.size()), count);
        for (const Vec3& p : pts) {
          EXPECT_NEAR(std::hypot(p.x - (x + 0.5) * 8, p.y - (y + 0.5) * 8), 2.4, kEps);
          EXPECT_NEAR(p.z, 3 * 9.6, kEps);
        }
      }
    }
  }
}

TEST(LeverArm, RelativeToCuboidCenter) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  ForceCandidate f;
  f.brick = 1;
  f.application_point = {6.4, 4, 9.6};
  expect_vec(lever_arm(f, a), {2.4, 0, 4.8});
  f.application_point = center_of_mass(a, 1);
  expect_vec(lever_arm(f, a), {0, 0, 0});
}

TEST(LeverArm, MirroredBrickMirrorsLever) {
  Assembly a;
  a.add("1x4", {0, 0, 0});
  ForceCandidate f;
  f.brick = 1;
  f.application_point = {3, 1, 2};
  const Vec3 l = lever_arm(f, a);
  const Assembly m = testing_support::mirror_x(a);
  f.application_point = {32 - 3, 1, 2};
  const Vec3 lm = lever_arm(f, m);
  expect_vec(lm, {-l.x, l.y, l.z});
}

TEST(BuildForceModel, OneByTwoOnTwoCavities) {
  Assembly a;
  a.ground_knobs = false;
  a.add("1x2", {0, 0, 0});
  a.add("1x2", {0, 0, 1});
  const ForceModel m = build_force_model(a);
  EXPECT_EQ(count(m, 2, ForceKind::S), 8u);
  EXPECT_EQ(count(m, 2, ForceKind::D), 8u);
  EXPECT_EQ(count(m, 2, ForceKind::K), 8u);
  EXPECT_EQ(count(m, 2, ForceKind::P), 0u);
  EXPECT_EQ(count(m, 2, ForceKind::U), 0u);
  EXPECT_EQ(count(m, 2, ForceKind::H), 0u);
  EXPECT_EQ(count(m, 1, ForceKind::P), 8u);
  EXPECT_EQ(count(m, 1, ForceKind::U), 8u);
}

TEST(BuildForceModel, UnitBrickOnBaseplate) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  const ForceModel m = build_force_model(a);
  EXPECT_EQ(count(m, 1, ForceKind::S), 4u);
  EXPECT_EQ(count(m, 1, ForceKind::D), 4u);
  EXPECT_EQ(count(m, 1, ForceKind::K), 4u);
  EXPECT_EQ(count(m, 1, ForceKind::P), 0u);
  EXPECT_EQ(count(m, 1, ForceKind::U), 0u);
  EXPECT_EQ(count(m, 1, ForceKind::H), 0u);
  EXPECT_EQ(m.variable_count(), 12);
  EXPECT_EQ(m.complementarity_pairs.size(), 4u);
  for (const auto& c : m.candidates) EXPECT_EQ(c.partner_brick, kGround);
}

TEST(BuildForceModel, FloatingBrickHasOnlyGravity) {
  Assembly a;
  a.add("1x1", {0, 0, 5});
  const ForceModel m = build_force_model(a);
  EXPECT_TRUE(m.candidates.empty());
  EXPECT_EQ(m.variable_count(), 0);
  EXPECT_NEAR(m.gravity_load[1].z, -0.43e-3 * 9.8, 1e-15);
  EXPECT_EQ(m.gravity_load[1].x, 0.0);
}

TEST(BuildForceModel, ExtraMassAddsToGravity) {
  Assembly a;
  a.add("1x1", {0, 0, 0}, Orientation::AlongX, 0.5);
  const ForceModel m = build_force_model(a);
  EXPECT_NEAR(m.gravity_load[1].z, -(0.43e-3 + 0.5) * 9.8, 1e-12);
}

TEST(BuildForceModel, SmoothStackUsesOverlapCorners) {
  Assembly a;
  a.mode = Mode::Smooth;
  a.add("1x2", {0, 0, 0});
  a.add("1x2", {0, 0, 1});
  const ForceModel m = build_force_model(a);
  EXPECT_EQ(count(m, 2, ForceKind::S), 4u);
  EXPECT_EQ(count(m, 1, ForceKind::P), 4u);
  for (int i : {1, 2}) {
    EXPECT_EQ(count(m, i, ForceKind::U), 0u);
    EXPECT_EQ(count(m, i, ForceKind::D), 0u);
    EXPECT_EQ(count(m, i, ForceKind::K), 0u);
  }
  std::vector<std::pair<double, double>> corners;
  for (int idx : m.of(2, ForceKind::S)) {
    const Vec3 p = m.candidates[idx].application_point;
    EXPECT_NEAR(p.z, 9.6, kEps);
    corners.emplace_back(p.x, p.y);
  }
  std::sort(corners.begin(), corners.end());
  EXPECT_EQ(corners, (std::vector<std::pair<double, double>>{{0, 0}, {0, 8}, {16, 0}, {16, 8}}));
  // The floor supports brick 1 at its footprint corners.
  EXPECT_EQ(count(m, 1, ForceKind::S), 4u);
  EXPECT_TRUE(m.complementarity_pairs.empty());
}

TEST(BuildForceModel, SmoothPartialOverlap) {
  Assembly a;
  a.mode = Mode::Smooth;
  a.add("2x4", {0, 0, 0});
  a.add("2x2", {3, 1, 1});
  const ForceModel m = build_force_model(a);
  std::vector<std::pair<double, double>> corners;
  for (int idx : m.of(2, ForceKind::S)) corners.emplace_back(m.candidates[idx].application_point.x, m.candidates[idx].application_point.y);
  std::sort(corners.begin(), corners.end());
  EXPECT_EQ(corners, (std::vector<std::pair<double, double>>{{24, 8}, {24, 16}, {32, 8}, {32, 16}}));
}

TEST(BuildForceModel, LateralFacesGetOneH) {
  Assembly a;
  a.add("1x4", {0, 0, 0});
  a.add("1x4", {0, 1, 0});
  const ForceModel m = build_force_model(a);
  ASSERT_EQ(count(m, 1, ForceKind::H), 4u);
  ASSERT_EQ(count(m, 2, ForceKind::H), 4u);
  for (int idx : m.of(1, ForceKind::H)) {
    const ForceCandidate& c = m.candidates[idx];
    expect_vec(c.direction, {0, -1, 0});
    EXPECT_NEAR(c.application_point.y, 8.0, kEps);
    EXPECT_NEAR(c.application_point.z, 4.8, kEps);
  }
}

TEST(BuildForceModel, FrictionBoundsAreMetadata) {
  Assembly a;
  a.add("1x1", {0, 0, 0});
  a.add("1x1", {0, 0, 1});
  const ForceModel m = build_force_model(a, 0.5);
  for (const auto& c : m.candidates) {
    const bool friction = c.kind == ForceKind::D || c.kind == ForceKind::U;
    EXPECT_EQ(c.magnitude_bound, friction ? 0.5 : kUnbounded);
  }
}

class ForceModelProperties : public ::testing::TestWithParam<int> {};

TEST_P(ForceModelProperties, ActionReactionPairsAreExact) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams p;
  p.mode = GetParam() % 3 == 0 ? Mode::Smooth : Mode::Interlocking;
  const Assembly a = testing_support::random_layout(rng, p);
  const ForceModel m = build_force_model(a);
  for (const ForceVariable& v : m.variables) {
    ASSERT_GE(v.candidates.size(), 1u);
    ASSERT_LE(v.candidates.size(), 2u);
    EXPECT_EQ(v.candidates.size() == 1, v.partner_brick == kGround);
    if (v.candidates.size() == 2) {
      const auto& c0 = m.candidates[v.candidates[0]];
      const auto& c1 = m.candidates[v.candidates[1]];
      EXPECT_EQ(c0.application_point, c1.application_point);
      EXPECT_EQ(c0.direction, -c1.direction);
      EXPECT_EQ(c0.variable_id, c1.variable_id);
    }
  }
}

TEST_P(ForceModelProperties, DirectionsFollowKinds) {
  std::mt19937_64 rng(GetParam());
  const Assembly a = testing_support::random_layout(rng, {});
  const ForceModel m = build_force_model(a);
  for (const auto& c : m.candidates) {
    switch (c.kind) {
      case ForceKind::S:
      case ForceKind::U: EXPECT_EQ(c.direction, (Vec3{0, 0, 1})); break;
      case ForceKind::P:
      case ForceKind::D: EXPECT_EQ(c.direction, (Vec3{0, 0, -1})); break;
      case ForceKind::H:
      case ForceKind::K:
        EXPECT_EQ(c.direction.z, 0.0);
        EXPECT_EQ(std::abs(c.direction.x) + std::abs(c.direction.y), 1.0);
        break;
    }
    expect_vec(c.lever, lever_arm(c, a));
  }
}

TEST_P(ForceModelProperties, CountsPerConnection) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams p;
  p.catalog.add({"3x4", 3, 4, 3.0e-3});
  const Assembly a = testing_support::random_layout(rng, p);
  const ForceModel m = build_force_model(a);
  std::map<int, std::size_t> s_expected, p_expected, k_expected, k_lower;
  for (const Connection& c : enumerate_connections(a)) {
    s_expected[c.upper_brick] += c.contact_count;
    k_expected[c.upper_brick] += 4;
    if (c.lower_brick != kGround) {
      p_expected[c.lower_brick] += c.contact_count;
      k_lower[c.lower_brick] += 4;
    }
  }
  for (int i = 1; i <= a.size(); ++i) {
    EXPECT_EQ(count(m, i, ForceKind::S), s_expected[i]);
    EXPECT_EQ(count(m, i, ForceKind::D), s_expected[i]);
    EXPECT_EQ(count(m, i, ForceKind::P), p_expected[i]);
    EXPECT_EQ(count(m, i, ForceKind::U), p_expected[i]);
    EXPECT_EQ(count(m, i, ForceKind::K), k_expected[i] + k_lower[i]);
    // S and D (P and U) are co-located one-to-one.
    auto points = [&](ForceKind k) {
      std::vector<std::tuple<double, double, double>> v;
      for (int idx : m.of(i, k)) {
        const Vec3 q = m.candidates[idx].application_point;
        v.emplace_back(q.x, q.y, q.z);
      }
      std::sort(v.begin(), v.end());
      return v;
    };
    EXPECT_EQ(points(ForceKind::S), points(ForceKind::D));
    EXPECT_EQ(points(ForceKind::P), points(ForceKind::U));
  }
}

TEST_P(ForceModelProperties, SmoothModeHasNoFriction) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams p;
  p.mode = Mode::Smooth;
  const Assembly a = testing_support::random_layout(rng, p);
  const ForceModel m = build_force_model(a);
  for (const auto& c : m.candidates) {
    EXPECT_NE(c.kind, ForceKind::U);
    EXPECT_NE(c.kind, ForceKind::D);
    EXPECT_NE(c.kind, ForceKind::K);
  }
}

TEST_P(ForceModelProperties, MirrorMapsModelOntoItself) {
  std::mt19937_64 rng(GetParam());
  testing_support::LayoutParams p;
  p.catalog.add({"3x4", 3, 4, 3.0e-3});
  const Assembly a = testing_support::random_layout(rng, p);
  const Assembly b = testing_support::mirror_y(a);
  int max_y = 0;
  for (int i = 1; i <= a.size(); ++i) max_y = std::max(max_y, footprint(a, i).y0 + footprint(a, i).size_y);
  const double plane = max_y * a.geometry.pitch;
  using Key = std::tuple<int, int, int, long, long, long, long, long, long>;
  auto key = [](const ForceCandidate& c, bool mirror, double plane) {
    auto r = [](double v) { return std::lround(v * 1e6); };
    const double y = mirror ? plane - c.application_point.y : c.application_point.y;
    const double dy = mirror ? -c.direction.y : c.direction.y;
    return Key{static_cast<int>(c.kind), c.brick, c.partner_brick, r(c.application_point.x), r(y),
               r(c.application_point.z), r(c.direction.x), r(dy), r(c.direction.z)};
  };
  std::vector<Key> ka, kb;
  for (const auto& c : build_force_model(a).candidates) ka.push_back(key(c, false, plane));
  for (const auto& c : build_force_model(b).candidates) kb.push_back(key(c, true, plane));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  EXPECT_EQ(ka, kb);
}

INSTANTIATE_TEST_SUITE_P(Random, ForceModelProperties, ::testing::Range(1, 41));

}  // namespace
}  // namespace brickstab
