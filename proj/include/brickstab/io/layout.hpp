#pragma once

#include <string>
#include <string_view>

#include "brickstab/assembly.hpp"
#include "brickstab/io/json_support.hpp"

namespace brickstab::io {

inline constexpr int kLayoutVersion = 1;
inline constexpr int kCatalogVersion = 1;

inline const char* to_string(Mode m) { return m == Mode::Interlocking ? "interlocking" : "smooth"; }

inline Mode parse_mode(std::string_view s) {
  if (s == "interlocking") return Mode::Interlocking;
  if (s == "smooth") return Mode::Smooth;
  throw FormatError("unknown mode '" + std::string(s) + "' (expected interlocking or smooth)");
}

/// Catalog document: {"format_version":1,"types":[{"id","width","length","mass_g"}]}.
inline Catalog parse_catalog(std::string_view text) {
  using namespace detail;
  const Json doc = parse_json(text, "catalog");
  require_object(doc, "catalog", {"format_version", "types"});
  check_version(doc, "catalog", kCatalogVersion);
  const Json& types = get_array(field(doc, "catalog", "types"), "catalog.types");
  Catalog catalog;
  for (std::size_t k = 0; k < types.size(); ++k) {
    const std::string path = "catalog.types[" + std::to_string(k) + "]";
    const Json& t = types[k];
    require_object(t, path, {"id", "width", "length", "mass_g"});
    BrickType bt;
    bt.id = get_string(field(t, path, "id"), path + ".id");
    bt.width_units = get_int(field(t, path, "width"), path + ".width");
    bt.length_units = get_int(field(t, path, "length"), path + ".length");
    bt.mass_kg = get_number(field(t, path, "mass_g"), path + ".mass_g") / 1000.0;
    if (!bt.valid()) throw FormatError(path + ": requires 1 <= width <= length and mass_g > 0");
    if (catalog.find(bt.id)) throw FormatError(path + ": duplicate id '" + bt.id + "'");
    catalog.add(std::move(bt));
  }
  return catalog;
}

inline std::string serialize_catalog(const Catalog& catalog) {
  Json types = Json::array();
  for (const BrickType& t : catalog.types()) {
    types.push_back({{"id", t.id}, {"width", t.width_units}, {"length", t.length_units},
                     {"mass_g", detail::kg_to_grams(t.mass_kg)}});
  }
  Json doc = {{"format_version", kCatalogVersion}, {"types", std::move(types)}};
  return doc.dump(2) + "\n";
}

/// Parses a layout document against `catalog`. Throws FormatError for syntax,
/// schema, and unknown-type problems and ValidationFailed for overlaps.
inline Assembly parse_layout(std::string_view text, const Catalog& catalog = default_catalog()) {
  using namespace detail;
  const Json doc = parse_json(text, "layout");
  require_object(doc, "layout", {"format_version", "mode", "ground_knobs", "bricks"});
  check_version(doc, "layout", kLayoutVersion);

  Assembly a;
  a.catalog = catalog;
  if (auto it = doc.find("mode"); it != doc.end()) {
    try {
      a.mode = parse_mode(get_string(*it, "layout.mode"));
    } catch (const FormatError& e) {
      throw FormatError(std::string("layout.mode: ") + e.what());
    }
  }
  if (auto it = doc.find("ground_knobs"); it != doc.end()) a.ground_knobs = get_bool(*it, "layout.ground_knobs");

  const Json& bricks = get_array(field(doc, "layout", "bricks"), "layout.bricks");
  for (std::size_t k = 0; k < bricks.size(); ++k) {
    const std::string path = "layout.bricks[" + std::to_string(k) + "]";
    const Json& b = bricks[k];
    require_object(b, path, {"type", "position", "orientation", "extra_mass_g"});
    const std::string type = get_string(field(b, path, "type"), path + ".type");
    if (!catalog.find(type)) throw FormatError(path + ".type: unknown brick type '" + type + "'");
    const Json& pos = get_array(field(b, path, "position"), path + ".position");
    if (pos.size() != 3) throw FormatError(path + ".position: expected [x, y, z]");
    const Cell cell{get_int(pos[0], path + ".position[0]"), get_int(pos[1], path + ".position[1]"),
                    get_int(pos[2], path + ".position[2]")};
    Orientation o = Orientation::AlongX;
    if (auto it = b.find("orientation"); it != b.end()) {
      const std::string s = get_string(*it, path + ".orientation");
      if (s == "y")
        o = Orientation::AlongY;
      else if (s != "x")
        throw FormatError(path + ".orientation: expected \"x\" or \"y\"");
    }
    double extra = 0.0;
    if (auto it = b.find("extra_mass_g"); it != b.end()) {
      extra = get_number(*it, path + ".extra_mass_g");
      if (extra < 0) throw FormatError(path + ".extra_mass_g: must be nonnegative");
    }
    a.add(type, cell, o, extra / 1000.0);
  }
  require_valid(a);
  return a;
}

inline std::string serialize_layout(const Assembly& a) {
  Json bricks = Json::array();
  for (const BrickInstance& b : a.bricks) {
    Json j = {{"type", b.type_id},
              {"position", {b.position.x, b.position.y, b.position.z}},
              {"orientation", b.orientation == Orientation::AlongX ? "x" : "y"}};
    if (b.extra_mass_kg != 0.0) j["extra_mass_g"] = detail::kg_to_grams(b.extra_mass_kg);
    bricks.push_back(std::move(j));
  }
  Json doc = {{"format_version", kLayoutVersion},
              {"mode", to_string(a.mode)},
              {"ground_knobs", a.ground_knobs},
              {"bricks", std::move(bricks)}};
  return doc.dump(2) + "\n";
}

}  // namespace brickstab::io
