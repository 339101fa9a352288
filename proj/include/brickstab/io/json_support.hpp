#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace brickstab::io {

using Json = nlohmann::ordered_json;

/// Malformed document: bad syntax, wrong field type, unknown field, or bad value.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Document written by an incompatible format version.
class VersionError : public FormatError {
 public:
  VersionError(std::string_view what, int found, int supported)
      : FormatError(std::string(what) + " format_version " + std::to_string(found) + " is not supported (expected " +
                    std::to_string(supported) + ")"),
        found_(found) {}
  int found() const { return found_; }

 private:
  int found_;
};

namespace detail {

inline Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw FormatError(std::string(what) + ": syntax error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + e.what());
  }
}

inline void require_object(const Json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw FormatError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw FormatError(path + ": unknown field '" + key + "'");
  }
}

inline const Json& field(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(path + ": missing field '" + key + "'");
  return *it;
}

inline int get_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw FormatError(path + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw FormatError(path + ": integer out of range");
  return static_cast<int>(v);
}

inline double get_number(const Json& j, const std::string& path) {
  if (!j.is_number()) throw FormatError(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw FormatError(path + ": expected a finite number");
  return v;
}

inline bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw FormatError(path + ": expected true or false");
  return j.get<bool>();
}

inline std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw FormatError(path + ": expected a string");
  return j.get<std::string>();
}

inline const Json& get_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw FormatError(path + ": expected an array");
  return j;
}

inline void check_version(const Json& doc, std::string_view what, int supported) {
  const int v = get_int(field(doc, std::string(what), "format_version"), std::string(what) + ".format_version");
  if (v != supported) throw VersionError(what, v, supported);
}

/// Grams value g with g / 1000 == kg exactly, so gram-denominated files round-trip.
inline double kg_to_grams(double kg) {
  double g = kg * 1000.0;
  if (g / 1000.0 == kg) return g;
  double up = g, down = g;
  for (int k = 0; k < 4; ++k) {
    up = std::nextafter(up, INFINITY);
    down = std::nextafter(down, -INFINITY);
    if (up / 1000.0 == kg) return up;
    if (down / 1000.0 == kg) return down;
  }
  return g;
}

}  // namespace detail
}  // namespace brickstab::io
