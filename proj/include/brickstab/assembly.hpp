#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "brickstab/geometry.hpp"

namespace brickstab {

/// Catalog entry. A brick is Q x X knobs with Q = width_units <= X = length_units.
struct BrickType {
  std::string id;
  int width_units = 1;
  int length_units = 1;
  double mass_kg = 0.0;

  bool valid() const { return width_units >= 1 && length_units >= width_units && mass_kg > 0.0; }
};

/// Canonical type id for a footprint, e.g. "2x4".
inline std::string type_id(int width_units, int length_units) {
  return std::to_string(width_units) + "x" + std::to_string(length_units);
}

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<BrickType> types) {
    for (auto& t : types) add(std::move(t));
  }

  void add(BrickType t) { types_[t.id] = std::move(t); }

  const BrickType* find(const std::string& id) const {
    auto it = types_.find(id);
    return it == types_.end() ? nullptr : &it->second;
  }

  const BrickType& at(const std::string& id) const {
    if (const BrickType* t = find(id)) return *t;
    throw std::out_of_range("unknown brick type '" + id + "'");
  }

  std::vector<BrickType> types() const {
    std::vector<BrickType> out;
    for (const auto& [id, t] : types_) out.push_back(t);
    return out;
  }

  bool empty() const { return types_.empty(); }

 private:
  std::map<std::string, BrickType> types_;
};

/// Measured brick masses. The commonly used subset is the default catalog.
inline Catalog default_catalog(bool include_uncommon = false) {
  auto grams = [](const char* id, int q, int x, double g) { return BrickType{id, q, x, g / 1000.0}; };
  std::vector<BrickType> t = {
      grams("1x1", 1, 1, 0.43), grams("1x2", 1, 2, 0.81), grams("1x4", 1, 4, 1.57),
      grams("2x2", 2, 2, 1.15), grams("2x4", 2, 4, 2.16), grams("2x6", 2, 6, 3.23),
  };
  if (include_uncommon) {
    t.push_back(grams("1x6", 1, 6, 2.28));
    t.push_back(grams("1x8", 1, 8, 3.03));
  }
  return Catalog(std::move(t));
}

struct UnitGeometry {
  double pitch = 8.0;         // mm, knob-to-knob spacing
  double brick_height = 9.6;  // mm
  double knob_radius = 2.4;   // mm
  double knob_height = 1.8;   // mm
  double gravity = 9.8;       // N/kg

  bool valid() const {
    return pitch > 0 && brick_height > 0 && knob_radius > 0 && knob_height > 0 && gravity > 0;
  }
};

/// AlongX: the long side runs along +X. AlongY: along +Y.
enum class Orientation { AlongX, AlongY };

enum class Mode { Interlocking, Smooth };

struct BrickInstance {
  int index = 0;  // 1-based
  std::string type_id;
  Cell position;  // minimum corner; z is the layer
  Orientation orientation = Orientation::AlongX;
  double extra_mass_kg = 0.0;
};

/// Placed bricks on the unit grid. Brick i is bricks[i - 1].
struct Assembly {
  std::vector<BrickInstance> bricks;
  Catalog catalog = default_catalog();
  UnitGeometry geometry;
  bool ground_knobs = true;
  Mode mode = Mode::Interlocking;

  int size() const { return static_cast<int>(bricks.size()); }
  const BrickInstance& brick(int index) const { return bricks.at(index - 1); }
  const BrickType& type_of(int index) const { return catalog.at(brick(index).type_id); }

  /// Appends a brick and returns its index.
  int add(std::string type, Cell position, Orientation o = Orientation::AlongX, double extra_mass_kg = 0.0) {
    bricks.push_back({size() + 1, std::move(type), position, o, extra_mass_kg});
    return size();
  }
};

/// Sentinel partner index for the baseplate / floor.
inline constexpr int kGround = 0;

/// Axis-aligned footprint of a placed brick, in cells.
struct Footprint {
  int x0 = 0;
  int y0 = 0;
  int size_x = 1;
  int size_y = 1;
  int z = 0;

  bool contains(int x, int y) const { return x >= x0 && x < x0 + size_x && y >= y0 && y < y0 + size_y; }
  bool on_border(int x, int y) const {
    return x == x0 || y == y0 || x == x0 + size_x - 1 || y == y0 + size_y - 1;
  }
};

inline Footprint footprint(const BrickType& t, const BrickInstance& b) {
  Footprint f;
  f.x0 = b.position.x;
  f.y0 = b.position.y;
  f.z = b.position.z;
  if (b.orientation == Orientation::AlongX) {
    f.size_x = t.length_units;
    f.size_y = t.width_units;
  } else {
    f.size_x = t.width_units;
    f.size_y = t.length_units;
  }
  return f;
}

inline Footprint footprint(const Assembly& a, int index) { return footprint(a.type_of(index), a.brick(index)); }

inline double total_mass_kg(const Assembly& a, int index) { return a.type_of(index).mass_kg + a.brick(index).extra_mass_kg; }

/// Geometric center of the brick's cuboid, in millimeters.
inline Vec3 center_of_mass(const Assembly& a, int index) {
  const Footprint f = footprint(a, index);
  const UnitGeometry& g = a.geometry;
  return {(f.x0 + 0.5 * f.size_x) * g.pitch, (f.y0 + 0.5 * f.size_y) * g.pitch, (f.z + 0.5) * g.brick_height};
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationError {
  enum class Kind { Overlap, UnknownType, InvalidType, BadIndex, NegativeCoordinate, NegativeExtraMass, BadGeometry };
  Kind kind;
  std::vector<int> bricks;
  std::string message;
};

inline std::vector<ValidationError> validate(const Assembly& a) {
  using Kind = ValidationError::Kind;
  std::vector<ValidationError> errors;
  if (!a.geometry.valid()) errors.push_back({Kind::BadGeometry, {}, "unit geometry values must be positive"});

  std::unordered_map<Cell, int, CellHash> owner;
  std::set<std::pair<int, int>> reported;
  for (std::size_t k = 0; k < a.bricks.size(); ++k) {
    const BrickInstance& b = a.bricks[k];
    if (b.index != static_cast<int>(k) + 1) {
      errors.push_back({Kind::BadIndex, {b.index},
                        "brick at position " + std::to_string(k + 1) + " has index " + std::to_string(b.index)});
    }
    if (b.extra_mass_kg < 0.0) {
      errors.push_back({Kind::NegativeExtraMass, {b.index}, "brick " + std::to_string(b.index) + " has negative extra mass"});
    }
    const BrickType* t = a.catalog.find(b.type_id);
    if (!t) {
      errors.push_back({Kind::UnknownType, {b.index},
                        "brick " + std::to_string(b.index) + " has unknown type '" + b.type_id + "'"});
      continue;
    }
    if (!t->valid()) {
      errors.push_back({Kind::InvalidType, {b.index}, "brick type '" + t->id + "' violates Q <= X or mass > 0"});
      continue;
    }
    if (b.position.x < 0 || b.position.y < 0 || b.position.z < 0) {
      errors.push_back({Kind::NegativeCoordinate, {b.index},
                        "brick " + std::to_string(b.index) + " has a negative coordinate"});
      continue;
    }
    const Footprint f = footprint(*t, b);
    for (int x = f.x0; x < f.x0 + f.size_x; ++x) {
      for (int y = f.y0; y < f.y0 + f.size_y; ++y) {
        auto [it, inserted] = owner.emplace(Cell{x, y, f.z}, b.index);
        if (inserted) continue;
        const auto pair = std::make_pair(it->second, b.index);
        if (reported.insert(pair).second) {
          errors.push_back({Kind::Overlap, {pair.first, pair.second},
                            "bricks " + std::to_string(pair.first) + " and " + std::to_string(pair.second) + " overlap"});
        }
      }
    }
  }
  return errors;
}

class ValidationFailed : public std::runtime_error {
 public:
  explicit ValidationFailed(std::vector<ValidationError> errors)
      : std::runtime_error(summarize(errors)), errors_(std::move(errors)) {}
  const std::vector<ValidationError>& errors() const { return errors_; }

 private:
  static std::string summarize(const std::vector<ValidationError>& errors) {
    std::ostringstream os;
    os << "invalid assembly:";
    for (const auto& e : errors) os << ' ' << e.message << ';';
    return os.str();
  }
  std::vector<ValidationError> errors_;
};

inline void require_valid(const Assembly& a) {
  auto errors = validate(a);
  if (!errors.empty()) throw ValidationFailed(std::move(errors));
}

// ---------------------------------------------------------------------------
// Connectivity

/// A knob-to-cavity connection. `cell` is the lower brick's knob cell;
/// ground connections use z = -1.
struct Connection {
  int lower_brick = kGround;
  int upper_brick = 0;
  Cell cell;
  int contact_count = 4;

  friend bool operator==(const Connection&, const Connection&) = default;
};

/// Contact count of a knob under an upper brick of type `t` at footprint cell (x, y).
inline int contact_count(const BrickType& t, const Footprint& upper, int x, int y) {
  if (t.width_units == 1) return 4;
  if (t.width_units == 2) return 3;
  return upper.on_border(x, y) ? 3 : 4;
}

/// Occupied cell -> brick index.
using OccupancyMap = std::unordered_map<Cell, int, CellHash>;

inline OccupancyMap occupancy(const Assembly& a) {
  OccupancyMap occ;
  for (int i = 1; i <= a.size(); ++i) {
    const Footprint f = footprint(a, i);
    for (int x = f.x0; x < f.x0 + f.size_x; ++x)
      for (int y = f.y0; y < f.y0 + f.size_y; ++y) occ[{x, y, f.z}] = i;
  }
  return occ;
}

/// Connections ordered by (upper brick, lower brick, cell).
inline std::vector<Connection> enumerate_connections(const Assembly& a) {
  const OccupancyMap occ = occupancy(a);
  std::vector<Connection> out;
  for (int i = 1; i <= a.size(); ++i) {
    const BrickType& t = a.type_of(i);
    const Footprint f = footprint(t, a.brick(i));
    for (int x = f.x0; x < f.x0 + f.size_x; ++x) {
      for (int y = f.y0; y < f.y0 + f.size_y; ++y) {
        const int contacts = contact_count(t, f, x, y);
        if (f.z == 0) {
          if (a.ground_knobs) out.push_back({kGround, i, {x, y, -1}, contacts});
          continue;
        }
        auto it = occ.find({x, y, f.z - 1});
        if (it != occ.end()) out.push_back({it->second, i, {x, y, f.z - 1}, contacts});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Connection& l, const Connection& r) {
    return std::tie(l.upper_brick, l.lower_brick, l.cell) < std::tie(r.upper_brick, r.lower_brick, r.cell);
  });
  return out;
}

/// One unit side face shared by two laterally touching bricks. `cell` belongs
/// to brick_a and `normal` points from brick_a into brick_b.
struct SharedFace {
  Cell cell;
  Compass normal;
};

struct Adjacency {
  int brick_a = 0;  // brick_a < brick_b
  int brick_b = 0;
  std::vector<SharedFace> shared_faces;
};

/// Lateral adjacencies ordered by (brick_a, brick_b); faces ordered by (cell, normal).
inline std::vector<Adjacency> enumerate_adjacencies(const Assembly& a) {
  const OccupancyMap occ = occupancy(a);
  std::map<std::pair<int, int>, std::vector<SharedFace>> faces;
  for (int i = 1; i <= a.size(); ++i) {
    const Footprint f = footprint(a, i);
    for (int x = f.x0; x < f.x0 + f.size_x; ++x) {
      for (int y = f.y0; y < f.y0 + f.size_y; ++y) {
        const Cell c{x, y, f.z};
        for (Compass dir : kCompass) {
          auto it = occ.find(c + step(dir));
          if (it == occ.end() || it->second <= i) continue;
          faces[{i, it->second}].push_back({c, dir});
        }
      }
    }
  }
  std::vector<Adjacency> out;
  for (auto& [key, list] : faces) {
    std::sort(list.begin(), list.end(), [](const SharedFace& l, const SharedFace& r) {
      return std::tie(l.cell, l.normal) < std::tie(r.cell, r.normal);
    });
    out.push_back({key.first, key.second, std::move(list)});
  }
  return out;
}

}  // namespace brickstab
