#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/lang/codec.hpp"

namespace gcrl::lang {

// Orientation tag of a primitive box. Each tag is one assignment of the three
// size slots (s0, s1, s2) to world axes:
//
//   tag        s0     s1     s2
//   east       east   south  sky
//   south      south  east   sky
//   sky        sky    east   south
//   eastsky    south  sky    east
//   southsky   east   sky    south
//   eastsouth  sky    south  east
//
// Two-axis tags name the axes of s2 and s1; one-axis tags name the axis of s0.
enum class Rotation : std::uint8_t { East, South, Sky, EastSky, SouthSky, EastSouth };

inline constexpr std::array<std::string_view, 6> kRotationNames = {"east",    "south",    "sky",
                                                                   "eastsky", "southsky", "eastsouth"};

// World axis (canonical) receiving size slot i under each tag.
inline constexpr std::array<std::array<Axis, 3>, 6> kRotationAxes = {{
    {Axis::X, Axis::Z, Axis::Y},  // east
    {Axis::Z, Axis::X, Axis::Y},  // south
    {Axis::Y, Axis::X, Axis::Z},  // sky
    {Axis::Z, Axis::Y, Axis::X},  // eastsky
    {Axis::X, Axis::Y, Axis::Z},  // southsky
    {Axis::Y, Axis::Z, Axis::X},  // eastsouth
}};

inline std::string_view rotation_name(Rotation r) { return kRotationNames[static_cast<std::size_t>(r)]; }

inline std::optional<Rotation> rotation_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kRotationNames.size(); ++i) {
    if (kRotationNames[i] == s) return static_cast<Rotation>(i);
  }
  return std::nullopt;
}

struct PrimitiveSpec {
  std::array<int, 3> start{};  // serialized with the axis convention
  std::array<int, 3> size{1, 1, 1};
  Rotation rotation = Rotation::EastSky;
  int color_id = 1;  // 0 = removal ("none")

  friend bool operator==(const PrimitiveSpec&, const PrimitiveSpec&) = default;
};

inline std::string_view prim_color_name(int color_id) {
  return color_id == 0 ? std::string_view("none") : gridbuild::color_name(gridbuild::color_from_id(color_id));
}

// Extent of the box along each canonical axis (x, y, z).
inline Cell primitive_extent(const PrimitiveSpec& p) {
  Cell e{0, 0, 0};
  const auto& axes = kRotationAxes[static_cast<std::size_t>(p.rotation)];
  for (std::size_t i = 0; i < 3; ++i) AxisConvention::component(e, axes[i]) = p.size[i];
  return e;
}

// Cells of the box anchored at `start` in (x, z, y) order.
inline std::vector<CoordEntry> expand_primitive(const PrimitiveSpec& p, const AxisConvention& conv = {}) {
  for (int s : p.size) {
    if (s < 1) throw ConfigError("primitive size components must be >= 1");
  }
  if (p.color_id < 0 || p.color_id > gridbuild::kNumColors) throw ConfigError("primitive has invalid color");
  const Cell origin = conv.to_canonical(p.start);
  const Cell ext = primitive_extent(p);
  std::vector<CoordEntry> out;
  out.reserve(static_cast<std::size_t>(ext.x * ext.y * ext.z));
  for (int dx = 0; dx < ext.x; ++dx)
    for (int dz = 0; dz < ext.z; ++dz)
      for (int dy = 0; dy < ext.y; ++dy) {
        const Cell c = origin + Cell{dx, dy, dz};
        if (!gridbuild::in_bounds(c)) throw ConfigError("primitive expands out of bounds at " + gridbuild::to_string(c));
        out.push_back({c, p.color_id});
      }
  return out;
}

// Canonical primitive for an axis-aligned box: sizes ascending, ties ordered
// south, sky, east.
inline PrimitiveSpec box_to_primitive(Cell min_corner, Cell extent, int color_id, const AxisConvention& conv = {}) {
  std::array<std::pair<int, Axis>, 3> order = {
      std::pair{extent.z, Axis::Z}, std::pair{extent.y, Axis::Y}, std::pair{extent.x, Axis::X}};
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  const std::array<Axis, 3> wanted = {order[0].second, order[1].second, order[2].second};
  PrimitiveSpec p;
  for (std::size_t r = 0; r < kRotationAxes.size(); ++r) {
    if (kRotationAxes[r] == wanted) p.rotation = static_cast<Rotation>(r);
  }
  p.size = {order[0].first, order[1].first, order[2].first};
  p.start = conv.from_canonical(min_corner);
  p.color_id = color_id;
  return p;
}

inline std::string format_primitive(const PrimitiveSpec& p) {
  const auto tuple = [](const std::array<int, 3>& t) {
    return "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) + ")";
  };
  return tuple(p.start) + ", " + tuple(p.size) + ", " + std::string(rotation_name(p.rotation)) + ", " +
         std::string(prim_color_name(p.color_id));
}

// Primitives are separated by ';'.
inline std::string format_prims(const std::vector<PrimitiveSpec>& prims) {
  std::string out;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    if (i) out += "; ";
    out += format_primitive(prims[i]);
  }
  return out;
}

inline std::vector<PrimitiveSpec> parse_prims(std::string_view text) {
  std::vector<PrimitiveSpec> out;
  Scanner s(text);
  if (s.at_end()) return out;
  do {
    PrimitiveSpec p;
    const auto tuple = [&](std::array<int, 3>& t) {
      s.expect('(');
      for (std::size_t i = 0; i < 3; ++i) {
        if (i) s.expect(',');
        t[i] = s.integer();
      }
      s.expect(')');
    };
    tuple(p.start);
    s.expect(',');
    const std::size_t size_at = s.pos();
    tuple(p.size);
    for (int v : p.size) {
      if (v < 1) throw ParseError("primitive size must be >= 1", size_at, s.pos());
    }
    s.expect(',');
    const std::size_t rot_at = s.pos();
    const std::string rot = s.word();
    const auto r = rotation_from_name(rot);
    if (!r) throw ParseError("unknown rotation '" + rot + "'", rot_at, s.pos());
    p.rotation = *r;
    s.expect(',');
    const std::size_t color_at = s.pos();
    const std::string color = s.word();
    if (color == "none") {
      p.color_id = 0;
    } else if (const auto c = gridbuild::color_from_name(color)) {
      p.color_id = gridbuild::color_id(*c);
    } else {
      throw ParseError("unknown color '" + color + "'", color_at, s.pos());
    }
    out.push_back(p);
  } while (s.accept(';'));
  if (!s.at_end()) s.fail("unexpected trailing input");
  return out;
}

}  // namespace gcrl::lang
