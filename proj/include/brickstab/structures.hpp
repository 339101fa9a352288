#pragma once

#include <string>

#include "brickstab/assembly.hpp"

namespace brickstab {

/// nx * ny * nz cuboid of 1x1 bricks on the baseplate.
inline Assembly unit_cuboid(int nx, int ny, int nz) {
  Assembly a;
  for (int z = 0; z < nz; ++z)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) a.add("1x1", {x, y, z});
  return a;
}

/// One brick per level, each shifted by `offset` cells along +X from the one below.
inline Assembly offset_stairs(int levels, const std::string& type = "2x4", int offset = 2) {
  Assembly a;
  for (int level = 0; level < levels; ++level) a.add(type, {level * offset, 0, level});
  return a;
}

}  // namespace brickstab
