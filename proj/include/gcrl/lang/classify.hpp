#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"

namespace gcrl::lang {

struct FigureClass {
  bool floor = false;
  bool flat = false;
  bool tall = false;
  bool air = false;

  friend bool operator==(const FigureClass&, const FigureClass&) = default;
};

inline constexpr std::array<std::string_view, 4> kFigureLabels = {"floor", "flat", "tall", "air"};

inline bool has_label(const FigureClass& f, std::string_view label) {
  if (label == "floor") return f.floor;
  if (label == "flat") return f.flat;
  if (label == "tall") return f.tall;
  if (label == "air") return f.air;
  throw ConfigError("unknown figure label '" + std::string(label) + "'");
}

inline std::string to_string(const FigureClass& f) {
  std::string out;
  for (std::string_view l : kFigureLabels) {
    if (!has_label(f, l)) continue;
    if (!out.empty()) out += ',';
    out += l;
  }
  return out;
}

inline FigureClass classify_figure(const std::vector<gridbuild::Cell>& cells) {
  if (cells.empty()) throw ConfigError("cannot classify an empty figure");
  gridbuild::Cell lo = cells.front(), hi = cells.front();
  for (const auto& c : cells) {
    lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
    hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
  }
  const int ex = hi.x - lo.x + 1, ey = hi.y - lo.y + 1, ez = hi.z - lo.z + 1;
  FigureClass f;
  f.floor = hi.y == 0;
  f.air = lo.y > 0;
  f.tall = ey > std::max(ex, ez);
  // A figure must also spread wider than it is high to count as flat, so a
  // lone block is not flat.
  f.flat = ey <= std::min(ex, ez) && ey <= 2 && std::max(ex, ez) > ey;
  return f;
}

inline FigureClass classify_figure(const std::vector<gridbuild::BlockSpec>& blocks) {
  std::vector<gridbuild::Cell> cells;
  cells.reserve(blocks.size());
  for (const auto& b : blocks) cells.push_back(b.cell);
  return classify_figure(cells);
}

}  // namespace gcrl::lang
