#pragma once

#include <string>
#include <vector>

#include "brickstab/assembly.hpp"
#include "brickstab/force_model.hpp"

namespace brickstab::testing_support {

struct NamedAssembly {
  std::string name;
  Assembly assembly;
};

inline int pair_count(const Assembly& a) {
  return static_cast<int>(build_force_model(a).complementarity_pairs.size());
}

/// Deterministic family of assemblies with at most four bricks: single bricks,
/// offset pairs, single-knob cantilevers, towers, bridges, and floating bricks.
/// Cases whose complementarity pair count exceeds `max_pairs` are skipped.
inline std::vector<NamedAssembly> small_family(int max_pairs = 10) {
  std::vector<NamedAssembly> out;
  auto keep = [&](std::string name, Assembly a) {
    if (!validate(a).empty() || pair_count(a) > max_pairs) return;
    out.push_back({std::move(name), std::move(a)});
  };
  const std::vector<std::string> types = {"1x1", "1x2", "1x4", "2x2", "2x4"};
  const std::vector<double> loads = {0.0, 0.002, 0.005, 0.01, 0.02, 0.04, 0.06, 0.1};

  for (const std::string& t : types) {
    for (int z : {0, 1}) {
      for (bool knobs : {false, true}) {
        Assembly a;
        a.ground_knobs = knobs;
        a.add(t, {0, 0, z});
        keep("single " + t + " z" + std::to_string(z) + (knobs ? " knobs" : ""), a);
      }
    }
  }

  // Two bricks: an upper brick of every type overlapping a 1x1 or 1x2 base at every offset.
  for (const std::string& base : {std::string("1x1"), std::string("1x2")}) {
    for (const std::string& top : {std::string("1x1"), std::string("1x2"), std::string("1x4"), std::string("2x2")}) {
      for (Orientation o : {Orientation::AlongX, Orientation::AlongY}) {
        for (int dx = -3; dx <= 1; ++dx) {
          for (int dy = -1; dy <= 0; ++dy) {
            for (double load : loads) {
              Assembly a;
              a.ground_knobs = false;
              a.add(base, {3, 3, 0});
              a.add(top, {3 + dx, 3 + dy, 1}, o, load);
              if (enumerate_connections(a).empty()) continue;
              keep(base + "+" + top + " o" + std::to_string(static_cast<int>(o)) + " d" + std::to_string(dx) +
                       "," + std::to_string(dy) + " m" + std::to_string(load),
                   a);
            }
          }
        }
      }
    }
  }

  // Three bricks: tower of 1x1s, and a 1x1 base under a 1x2 with a loaded 1x1 on either end.
  for (double load : loads) {
    Assembly tower;
    tower.ground_knobs = false;
    for (int z = 0; z < 3; ++z) tower.add("1x1", {0, 0, z}, Orientation::AlongX, z == 2 ? load : 0.0);
    keep("tower3 m" + std::to_string(load), tower);
    for (int end : {0, 1}) {
      Assembly a;
      a.ground_knobs = false;
      a.add("1x1", {1, 0, 0});
      a.add("1x2", {1 - end, 0, 1});
      a.add("1x1", {end == 0 ? 0 : 2, 0, 2}, Orientation::AlongX, load);
      keep("lever end" + std::to_string(end) + " m" + std::to_string(load), a);
    }
  }

  // Bridges: two 1x1 pillars under a 1x4, plus an optional brick that is either floating or stacked.
  for (int gap : {1, 2, 3}) {
    for (double load : loads) {
      Assembly a;
      a.ground_knobs = false;
      a.add("1x1", {0, 0, 0});
      a.add("1x1", {gap, 0, 0});
      a.add("1x4", {0, 0, 1}, Orientation::AlongX, load);
      keep("bridge gap" + std::to_string(gap) + " m" + std::to_string(load), a);
      Assembly floating = a;
      floating.add("1x2", {6, 6, 3});
      keep("bridge+floating gap" + std::to_string(gap) + " m" + std::to_string(load), floating);
      Assembly side = a;
      side.add("1x1", {gap + 1, 1, 0});
      keep("bridge+side gap" + std::to_string(gap) + " m" + std::to_string(load), side);
    }
  }

  // Four bricks with a floating member and offset pairs.
  for (int dx = -1; dx <= 1; ++dx) {
    for (double load : loads) {
      Assembly a;
      a.ground_knobs = false;
      a.add("1x2", {2, 2, 0});
      a.add("1x2", {2 + dx, 2, 1}, Orientation::AlongX, load);
      a.add("2x2", {8, 8, 0});
      a.add("1x1", {0, 8, 4});
      keep("quad d" + std::to_string(dx) + " m" + std::to_string(load), a);
    }
  }
  return out;
}

}  // namespace brickstab::testing_support
