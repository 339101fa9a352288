#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brickstab/assembly.hpp"
#include "brickstab/geometry.hpp"

namespace brickstab {

/// S support, P press, D drag, U pull, H lateral press, K knob press.
enum class ForceKind { S, P, D, U, H, K };

inline constexpr std::array<ForceKind, 6> kForceKinds = {ForceKind::S, ForceKind::P, ForceKind::D,
                                                         ForceKind::U, ForceKind::H, ForceKind::K};

inline const char* to_string(ForceKind k) {
  switch (k) {
    case ForceKind::S: return "S";
    case ForceKind::P: return "P";
    case ForceKind::D: return "D";
    case ForceKind::U: return "U";
    case ForceKind::H: return "H";
    case ForceKind::K: return "K";
  }
  return "?";
}

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// One force acting on one brick. Action-reaction partners share variable_id.
struct ForceCandidate {
  int variable_id = 0;
  ForceKind kind = ForceKind::S;
  int brick = 0;
  int partner_brick = kGround;
  Vec3 application_point;
  Vec3 direction;
  double magnitude_bound = kUnbounded;
  Vec3 lever;  // application_point minus the brick's center of mass
};

/// A decision variable: the force magnitude shared by up to two candidates.
struct ForceVariable {
  int id = 0;
  ForceKind kind = ForceKind::S;  // kind as seen by `brick`
  int brick = 0;
  int partner_brick = kGround;
  std::vector<int> candidates;  // indices into ForceModel::candidates
};

struct ForceModel {
  std::vector<ForceCandidate> candidates;
  std::vector<ForceVariable> variables;
  /// per_brick[i][kind] lists candidate indices; index 0 is unused.
  std::vector<std::array<std::vector<int>, 6>> per_brick;
  /// Weight vector of each brick in newtons; index 0 is unused.
  std::vector<Vec3> gravity_load;
  std::vector<Vec3> center_of_mass;
  /// Co-located (support, drag) variable pairs, i.e. {S,D} on the upper brick and {P,U} on the lower.
  std::vector<std::pair<int, int>> complementarity_pairs;
  double pitch = 8.0;
  Mode mode = Mode::Interlocking;

  int variable_count() const { return static_cast<int>(variables.size()); }
  int brick_count() const { return static_cast<int>(gravity_load.size()) - 1; }

  const std::vector<int>& of(int brick, ForceKind k) const { return per_brick.at(brick)[static_cast<int>(k)]; }
};

/// Knob circle contact points of a connection, in the order +X, -X, +Y, -Y.
/// Three-contact knobs omit the point that faces the upper footprint's center
/// (ties on both axes resolve to the X axis).
inline std::vector<Vec3> contact_points(const Connection& c, const UnitGeometry& g, const Footprint& upper) {
  const Vec3 center{(c.cell.x + 0.5) * g.pitch, (c.cell.y + 0.5) * g.pitch, (c.cell.z + 1) * g.brick_height};
  std::vector<Vec3> points;
  points.reserve(4);
  bool drop[4] = {false, false, false, false};
  if (c.contact_count == 3) {
    const double vx = (upper.x0 + 0.5 * upper.size_x) - (c.cell.x + 0.5);
    const double vy = (upper.y0 + 0.5 * upper.size_y) - (c.cell.y + 0.5);
    if (std::abs(vx) >= std::abs(vy))
      drop[vx >= 0 ? 0 : 1] = true;
    else
      drop[vy > 0 ? 2 : 3] = true;
  }
  for (int k = 0; k < 4; ++k) {
    if (!drop[k]) points.push_back(center + g.knob_radius * unit(kCompass[k]));
  }
  return points;
}

/// Difference of two absolute positions rounded to a nanometer grid, so that
/// translated copies of an assembly see bit-identical levers.
inline Vec3 relative_position(Vec3 point, Vec3 origin) {
  auto snap = [](double v) { return std::round(v * 1e6) / 1e6; };
  const Vec3 d = point - origin;
  return {snap(d.x), snap(d.y), snap(d.z)};
}

inline Vec3 lever_arm(const ForceCandidate& f, const Assembly& a) {
  return relative_position(f.application_point, center_of_mass(a, f.brick));
}

namespace detail {

class ForceModelBuilder {
 public:
  ForceModelBuilder(const Assembly& a, double friction_bound) : friction_bound_(friction_bound) {
    const int n = a.size();
    m_.pitch = a.geometry.pitch;
    m_.mode = a.mode;
    m_.per_brick.resize(n + 1);
    m_.gravity_load.resize(n + 1);
    m_.center_of_mass.resize(n + 1);
    for (int i = 1; i <= n; ++i) {
      m_.gravity_load[i] = {0.0, 0.0, -total_mass_kg(a, i) * a.geometry.gravity};
      m_.center_of_mass[i] = center_of_mass(a, i);
    }
  }

  /// New variable acting on `brick` with `kind` along `direction`, and with the
  /// opposite kind and direction on `partner` unless that is the ground.
  int add(ForceKind kind, int brick, int partner, Vec3 point, Vec3 direction) {
    ForceVariable v;
    v.id = m_.variable_count();
    v.kind = kind;
    v.brick = brick;
    v.partner_brick = partner;
    const bool friction = kind == ForceKind::D || kind == ForceKind::U;
    const double bound = friction ? friction_bound_ : kUnbounded;
    v.candidates.push_back(push(v.id, kind, brick, partner, point, direction, bound));
    if (partner != kGround) {
      v.candidates.push_back(push(v.id, reaction(kind), partner, brick, point, -direction, bound));
    }
    m_.variables.push_back(std::move(v));
    return m_.variables.back().id;
  }

  void add_pair(int support, int drag) { m_.complementarity_pairs.emplace_back(support, drag); }

  ForceModel finish() { return std::move(m_); }

 private:
  static ForceKind reaction(ForceKind k) {
    switch (k) {
      case ForceKind::S: return ForceKind::P;
      case ForceKind::P: return ForceKind::S;
      case ForceKind::D: return ForceKind::U;
      case ForceKind::U: return ForceKind::D;
      default: return k;
    }
  }

  int push(int id, ForceKind kind, int brick, int partner, Vec3 point, Vec3 direction, double bound) {
    const int idx = static_cast<int>(m_.candidates.size());
    m_.candidates.push_back({id, kind, brick, partner, point, direction, bound,
                             relative_position(point, m_.center_of_mass[brick])});
    m_.per_brick[brick][static_cast<int>(kind)].push_back(idx);
    return idx;
  }

  double friction_bound_;
  ForceModel m_;
};

/// Overlap rectangle of two footprints in cells, or nullopt if disjoint.
inline std::optional<std::array<int, 4>> overlap(const Footprint& p, const Footprint& q) {
  const int x0 = std::max(p.x0, q.x0), x1 = std::min(p.x0 + p.size_x, q.x0 + q.size_x);
  const int y0 = std::max(p.y0, q.y0), y1 = std::min(p.y0 + p.size_y, q.y0 + q.size_y);
  if (x0 >= x1 || y0 >= y1) return std::nullopt;
  return std::array<int, 4>{x0, y0, x1, y1};
}

}  // namespace detail

/// Builds every candidate force of the assembly. `friction_bound` is recorded
/// on D and U candidates as metadata only.
inline ForceModel build_force_model(const Assembly& a, double friction_bound = 0.98) {
  detail::ForceModelBuilder b(a, friction_bound);
  const UnitGeometry& g = a.geometry;
  const Vec3 up{0, 0, 1};
  const Vec3 down{0, 0, -1};

  const bool knob_floor = a.mode == Mode::Interlocking && a.ground_knobs;
  if (a.mode == Mode::Interlocking) {
    for (const Connection& c : enumerate_connections(a)) {
      const Footprint upper = footprint(a, c.upper_brick);
      for (const Vec3& p : contact_points(c, g, upper)) {
        const int s = b.add(ForceKind::S, c.upper_brick, c.lower_brick, p, up);
        const int d = b.add(ForceKind::D, c.upper_brick, c.lower_brick, p, down);
        b.add_pair(s, d);
      }
      const Vec3 knob{(c.cell.x + 0.5) * g.pitch, (c.cell.y + 0.5) * g.pitch,
                      (c.cell.z + 1) * g.brick_height + 0.5 * g.knob_height};
      for (Compass dir : kCompass) b.add(ForceKind::K, c.upper_brick, c.lower_brick, knob, unit(dir));
    }
  } else {
    std::set<std::pair<int, int>> seen;
    for (const Connection& c : enumerate_connections(a)) {
      if (c.lower_brick == kGround || !seen.emplace(c.upper_brick, c.lower_brick).second) continue;
      const Footprint upper = footprint(a, c.upper_brick);
      const auto r = detail::overlap(upper, footprint(a, c.lower_brick));
      const double z = upper.z * g.brick_height;
      for (int cy : {(*r)[1], (*r)[3]})
        for (int cx : {(*r)[0], (*r)[2]})
          b.add(ForceKind::S, c.upper_brick, c.lower_brick, {cx * g.pitch, cy * g.pitch, z}, up);
    }
  }
  if (!knob_floor) {
    for (int i = 1; i <= a.size(); ++i) {
      const Footprint f = footprint(a, i);
      if (f.z != 0) continue;
      for (int cy : {f.y0, f.y0 + f.size_y})
        for (int cx : {f.x0, f.x0 + f.size_x}) b.add(ForceKind::S, i, kGround, {cx * g.pitch, cy * g.pitch, 0.0}, up);
    }
  }

  for (const Adjacency& adj : enumerate_adjacencies(a)) {
    for (const SharedFace& face : adj.shared_faces) {
      const Vec3 n = unit(face.normal);
      const Vec3 center{(face.cell.x + 0.5) * g.pitch, (face.cell.y + 0.5) * g.pitch,
                        (face.cell.z + 0.5) * g.brick_height};
      b.add(ForceKind::H, adj.brick_a, adj.brick_b, center + (0.5 * g.pitch) * n, -n);
    }
  }
  return b.finish();
}

}  // namespace brickstab
