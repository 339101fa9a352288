#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "brickstab/assembly.hpp"
#include "brickstab/stability.hpp"

namespace brickstab::io {

using Rgb = std::array<int, 3>;

/// Heatmap color: black at V = 0, ramping to red as V grows, white at V = 1.
inline Rgb heat_color(double v) {
  if (v >= 1.0) return {255, 255, 255};
  if (v <= 0.0) return {0, 0, 0};
  return {static_cast<int>(std::lround(255.0 * v)), 0, 0};
}

/// ASCII PLY with one cuboid per brick (8 vertices, 6 quads), colored per face by score.
inline std::string export_heatmap_mesh(const Assembly& a, const StabilityReport& report) {
  const int n = a.size();
  if (report.brick_count() != n) throw std::invalid_argument("report does not belong to this assembly");
  std::string out;
  out += "ply\nformat ascii 1.0\ncomment brick stability heatmap\n";
  out += "element vertex " + std::to_string(8 * n) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "element face " + std::to_string(6 * n) + "\n";
  out += "property list uchar int vertex_indices\n";
  out += "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out += "end_header\n";

  const UnitGeometry& g = a.geometry;
  char buf[96];
  for (int i = 1; i <= n; ++i) {
    const Footprint f = footprint(a, i);
    const double x[2] = {f.x0 * g.pitch, (f.x0 + f.size_x) * g.pitch};
    const double y[2] = {f.y0 * g.pitch, (f.y0 + f.size_y) * g.pitch};
    const double z[2] = {f.z * g.brick_height, (f.z + 1) * g.brick_height};
    for (int k = 0; k < 8; ++k) {
      std::snprintf(buf, sizeof buf, "%.4f %.4f %.4f\n", x[k & 1], y[(k >> 1) & 1], z[k >> 2]);
      out += buf;
    }
  }
  // Corner k has bits (x, y, z); faces wound counter-clockwise seen from outside.
  static constexpr int kFaces[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                       {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
  for (int i = 1; i <= n; ++i) {
    const Rgb c = heat_color(report.score[i]);
    const int base = 8 * (i - 1);
    for (const auto& face : kFaces) {
      std::snprintf(buf, sizeof buf, "4 %d %d %d %d %d %d %d\n", base + face[0], base + face[1], base + face[2],
                    base + face[3], c[0], c[1], c[2]);
      out += buf;
    }
  }
  return out;
}

}  // namespace brickstab::io
