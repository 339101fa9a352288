#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "brickstab/assembly.hpp"
#include "brickstab/io/json_support.hpp"

namespace brickstab::io {

inline constexpr int kVoxelVersion = 1;

struct VoxelGrid {
  std::array<int, 3> dims{20, 20, 20};
  std::set<Cell> occupied;

  bool in_bounds(const Cell& c) const {
    return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < dims[0] && c.y < dims[1] && c.z < dims[2];
  }
  bool contains(const Cell& c) const { return occupied.count(c) > 0; }
};

/// {"format_version":1,"dims":[nx,ny,nz],"occupied":[[x,y,z],...]}; dims default to 20^3.
inline VoxelGrid parse_voxel_grid(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text, "voxel grid");
  require_object(doc, "grid", {"format_version", "dims", "occupied"});
  check_version(doc, "grid", kVoxelVersion);
  VoxelGrid g;
  if (auto it = doc.find("dims"); it != doc.end()) {
    const Json& d = get_array(*it, "grid.dims");
    if (d.size() != 3) throw FormatError("grid.dims: expected [nx, ny, nz]");
    for (int k = 0; k < 3; ++k) {
      g.dims[k] = get_int(d[k], "grid.dims[" + std::to_string(k) + "]");
      if (g.dims[k] <= 0) throw FormatError("grid.dims: dimensions must be positive");
    }
  }
  const Json& cells = get_array(field(doc, "grid", "occupied"), "grid.occupied");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string path = "grid.occupied[" + std::to_string(k) + "]";
    const Json& c = get_array(cells[k], path);
    if (c.size() != 3) throw FormatError(path + ": expected [x, y, z]");
    const Cell cell{get_int(c[0], path), get_int(c[1], path), get_int(c[2], path)};
    if (!g.in_bounds(cell)) throw FormatError(path + ": cell lies outside the declared dims");
    g.occupied.insert(cell);
  }
  return g;
}

inline std::string serialize_voxel_grid(const VoxelGrid& g) {
  Json cells = Json::array();
  for (const Cell& c : g.occupied) cells.push_back({c.x, c.y, c.z});
  Json doc = {{"format_version", kVoxelVersion}, {"dims", {g.dims[0], g.dims[1], g.dims[2]}}, {"occupied", cells}};
  return doc.dump() + "\n";
}

namespace detail {

struct Placement {
  const BrickType* type;
  Orientation orientation;
  Footprint fp;

  int area() const { return fp.size_x * fp.size_y; }
};

/// Every placement of an allowed type that covers `c` and fits in `free_cells`.
inline std::vector<Placement> placements_covering(const Cell& c, const std::vector<BrickType>& types,
                                                  const std::set<Cell>& free_cells) {
  std::vector<Placement> out;
  for (const BrickType& t : types) {
    for (Orientation o : {Orientation::AlongX, Orientation::AlongY}) {
      if (o == Orientation::AlongY && t.width_units == t.length_units) continue;
      const int sx = o == Orientation::AlongX ? t.length_units : t.width_units;
      const int sy = o == Orientation::AlongX ? t.width_units : t.length_units;
      for (int x0 = c.x - sx + 1; x0 <= c.x; ++x0) {
        for (int y0 = c.y - sy + 1; y0 <= c.y; ++y0) {
          bool fits = true;
          for (int x = x0; x < x0 + sx && fits; ++x)
            for (int y = y0; y < y0 + sy && fits; ++y) fits = free_cells.count({x, y, c.z}) > 0;
          if (fits) out.push_back({&t, o, {x0, y0, sx, sy, c.z}});
        }
      }
    }
  }
  return out;
}

}  // namespace detail

/// Greedy per-layer cover of the grid by allowed brick types. Cells with nothing
/// beneath are seeded first and prefer footprints that also cover a supported
/// cell; the remaining cells take the largest fitting footprint. Ties go to the
/// larger area, then the lexicographically smallest corner (x, then y), then
/// orientation x before y, then type id. Requires a 1x1 type.
inline Assembly generate_layout(const VoxelGrid& grid, const std::vector<BrickType>& allowed_types) {
  std::vector<BrickType> types = allowed_types;
  std::sort(types.begin(), types.end(), [](const BrickType& a, const BrickType& b) { return a.id < b.id; });
  const bool has_unit =
      std::any_of(types.begin(), types.end(), [](const BrickType& t) { return t.width_units == 1 && t.length_units == 1; });
  if (!has_unit) throw std::invalid_argument("generate_layout requires a 1x1 brick type");
  for (const BrickType& t : types)
    if (!t.valid()) throw std::invalid_argument("invalid brick type '" + t.id + "'");

  Assembly a;
  a.catalog = Catalog(types);
  for (const Cell& c : grid.occupied)
    if (c.x < 0 || c.y < 0 || c.z < 0) throw std::invalid_argument("voxel grid has a negative coordinate");

  std::set<Cell> free_cells;
  auto place = [&](const detail::Placement& p) {
    a.add(p.type->id, {p.fp.x0, p.fp.y0, p.fp.z}, p.orientation);
    for (int x = p.fp.x0; x < p.fp.x0 + p.fp.size_x; ++x)
      for (int y = p.fp.y0; y < p.fp.y0 + p.fp.size_y; ++y) free_cells.erase({x, y, p.fp.z});
  };
  auto corner_order = [](const detail::Placement& p, const detail::Placement& q) {
    return std::tuple(p.fp.x0, p.fp.y0, p.orientation, p.type->id) <
           std::tuple(q.fp.x0, q.fp.y0, q.orientation, q.type->id);
  };

  std::vector<std::vector<Cell>> layers;
  for (const Cell& c : grid.occupied) {
    if (static_cast<int>(layers.size()) <= c.z) layers.resize(c.z + 1);
    layers[c.z].push_back(c);
  }
  for (int z = 0; z < static_cast<int>(layers.size()); ++z) {
    std::sort(layers[z].begin(), layers[z].end());
    free_cells = std::set<Cell>(layers[z].begin(), layers[z].end());
    auto supported = [&](const Cell& c) { return c.z == 0 || grid.contains({c.x, c.y, c.z - 1}); };
    auto covers_supported = [&](const detail::Placement& p) {
      for (int x = p.fp.x0; x < p.fp.x0 + p.fp.size_x; ++x)
        for (int y = p.fp.y0; y < p.fp.y0 + p.fp.size_y; ++y)
          if (supported({x, y, z})) return true;
      return false;
    };

    for (const Cell& c : layers[z]) {
      if (supported(c) || !free_cells.count(c)) continue;
      auto options = detail::placements_covering(c, types, free_cells);
      const auto best = std::min_element(options.begin(), options.end(), [&](const auto& p, const auto& q) {
        const bool ps = covers_supported(p), qs = covers_supported(q);
        if (ps != qs) return ps;
        if (p.area() != q.area()) return p.area() > q.area();
        return corner_order(p, q);
      });
      place(*best);
    }
    for (const Cell& c : layers[z]) {
      if (!free_cells.count(c)) continue;
      auto options = detail::placements_covering(c, types, free_cells);
      const auto best = std::min_element(options.begin(), options.end(), [&](const auto& p, const auto& q) {
        if (p.area() != q.area()) return p.area() > q.area();
        return corner_order(p, q);
      });
      place(*best);
    }
  }
  return a;
}

}  // namespace brickstab::io
