#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <functional>

namespace brickstab {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(Vec3 a, Vec3 b) = default;

  double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
};

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

/// Integer grid coordinate of a unit voxel; z is the layer index.
struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
  friend Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
};

struct CellHash {
  std::size_t operator()(const Cell& c) const noexcept {
    std::size_t h = static_cast<std::size_t>(c.x) * 73856093u;
    h ^= static_cast<std::size_t>(c.y) * 19349663u;
    h ^= static_cast<std::size_t>(c.z) * 83492791u;
    return h;
  }
};

/// Horizontal compass directions, in the fixed order used for contact points.
enum class Compass { PlusX, MinusX, PlusY, MinusY };

inline constexpr Compass kCompass[4] = {Compass::PlusX, Compass::MinusX, Compass::PlusY, Compass::MinusY};

inline Vec3 unit(Compass c) {
  switch (c) {
    case Compass::PlusX: return {1, 0, 0};
    case Compass::MinusX: return {-1, 0, 0};
    case Compass::PlusY: return {0, 1, 0};
    case Compass::MinusY: return {0, -1, 0};
  }
  return {};
}

inline Cell step(Compass c) {
  switch (c) {
    case Compass::PlusX: return {1, 0, 0};
    case Compass::MinusX: return {-1, 0, 0};
    case Compass::PlusY: return {0, 1, 0};
    case Compass::MinusY: return {0, -1, 0};
  }
  return {};
}

inline Compass opposite(Compass c) {
  switch (c) {
    case Compass::PlusX: return Compass::MinusX;
    case Compass::MinusX: return Compass::PlusX;
    case Compass::PlusY: return Compass::MinusY;
    case Compass::MinusY: return Compass::PlusY;
  }
  return c;
}

}  // namespace brickstab
