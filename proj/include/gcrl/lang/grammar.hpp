#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/lang/normalize.hpp"
#include "gcrl/lang/tokens.hpp"

namespace gcrl::lang {

// Building instructions mini-language.
//
//   instruction := step (sep+ step)* sep*
//   sep         := "," | "." | ";" | "!" | "then" | "and" | "next" | "finally"
//   step        := [verb] shape anchor*  |  destroy-verb target
//   shape       := N COLOR blocks in a (row|line) [going DIR]
//                | a (row|line) of N COLOR blocks [going DIR]
//                | N COLOR blocks in a COLUMN  |  a COLUMN of N COLOR blocks
//                | [a] N by M COLOR (square|rectangle) [going DIR and DIR]
//                | (a|one) COLOR block
//   anchor      := [","] ( in the (middle|center) [of the grid]
//                | K UNIT DIR of [the] center  |  K UNIT DIR of it
//                | to the DIR of it  |  on top of it
//                | [floating] K UNIT above the ground )
//   target      := the (last|first|top|bottom) block | the SHAPE | it
//
// "of it" anchors refer to the most recent placement step. Directions are
// north (-z), south (+z), east (+x), west (-x).

enum class ShapeKind { Row, Column, Square, Rectangle, Single };

inline constexpr std::string_view kPlaceVerbs[] = {"place", "build", "put", "make", "add", "create", "stack", "lay"};
inline constexpr std::string_view kDestroyVerbs[] = {"destroy", "remove", "break", "delete"};
inline constexpr std::string_view kRowNouns[] = {"row", "line"};
inline constexpr std::string_view kColumnNouns[] = {"column", "tower", "column/tower", "stack", "pillar"};
inline constexpr std::string_view kBlockNouns[] = {"block", "blocks"};
inline constexpr std::string_view kUnitNouns[] = {"row",  "rows",  "block", "blocks", "cell",
                                                  "cells", "space", "spaces", "step",  "steps"};
inline constexpr std::string_view kCenterWords[] = {"middle", "center", "centre"};
inline constexpr std::string_view kAreaWords[] = {"grid", "space", "board", "area", "field"};
inline constexpr std::string_view kDirModifiers[] = {"going", "heading", "toward", "towards", "extending", "running"};
inline constexpr std::string_view kStepSeparators[] = {",", ".", ";", "!", "then", "and", "next", "finally"};
inline constexpr std::string_view kDirectionWords[] = {"north", "south", "east", "west"};

inline std::optional<Cell> direction_offset(std::string_view w) {
  if (w == "north") return Cell{0, 0, -1};
  if (w == "south") return Cell{0, 0, 1};
  if (w == "east") return Cell{1, 0, 0};
  if (w == "west") return Cell{-1, 0, 0};
  return std::nullopt;
}

namespace detail {

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Single;
  int n = 1;
  int m = 1;
  Cell d1{1, 0, 0};
  Cell d2{0, 0, 1};
  int color_id = 1;
};

enum class AnchorKind { Default, Center, FromCenter, OnTop, FromIt };

struct Anchor {
  AnchorKind kind = AnchorKind::Default;
  int k = 0;
  Cell dir{0, 0, 0};
  std::optional<int> elevation;
};

struct PlacedStep {
  ShapeKind kind;
  Cell origin;
  std::vector<CoordEntry> cells;  // generation order
  std::vector<bool> alive;
};

inline std::vector<Cell> shape_cells(const ShapeSpec& s) {
  std::vector<Cell> out;
  switch (s.kind) {
    case ShapeKind::Single:
      out.push_back({0, 0, 0});
      break;
    case ShapeKind::Row:
      for (int i = 0; i < s.n; ++i) out.push_back(Cell{s.d1.x * i, 0, s.d1.z * i});
      break;
    case ShapeKind::Column:
      for (int i = 0; i < s.n; ++i) out.push_back({0, i, 0});
      break;
    case ShapeKind::Square:
    case ShapeKind::Rectangle:
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.m; ++j)
          out.push_back(Cell{s.d1.x * i + s.d2.x * j, 0, s.d1.z * i + s.d2.z * j});
      break;
  }
  return out;
}

class GridParser {
 public:
  explicit GridParser(std::string_view text) : text_(text), cur_(tokenize(text), text.size()) {}

  std::vector<PlanStep> parse() {
    if (cur_.done()) throw ParseError("empty instruction", 0, text_.size());
    while (true) {
      step();
      bool separated = false;
      while (cur_.accept_in(kStepSeparators)) separated = true;
      if (cur_.done()) break;
      if (!separated) cur_.fail("unexpected token");
    }
    return std::move(steps_);
  }

 private:
  int number() {
    const Token* t = cur_.peek();
    if (!t) cur_.fail("expected a number");
    const auto v = number_value(t->text);
    if (!v) cur_.fail("expected a number");
    if (*v < 1) throw ParseError("count must be positive", t->begin, t->end);
    cur_.next();
    return *v;
  }

  bool peek_number(std::size_t ahead = 0) const {
    const Token* t = cur_.peek(ahead);
    return t && number_value(t->text).has_value();
  }

  int color() {
    const Token* t = cur_.peek();
    if (!t) cur_.fail("expected a color");
    const auto c = gridbuild::color_from_name(t->text);
    if (!c) cur_.fail("expected a color");
    cur_.next();
    return gridbuild::color_id(*c);
  }

  Cell direction() {
    const Token* t = cur_.peek();
    if (!t) cur_.fail("expected a direction");
    const auto d = direction_offset(t->text);
    if (!d) cur_.fail("expected a direction");
    cur_.next();
    return *d;
  }

  void row_direction(ShapeSpec& s) {
    if (cur_.accept_in(kDirModifiers)) s.d1 = direction();
  }

  void rect_directions(ShapeSpec& s) {
    if (!cur_.accept_in(kDirModifiers)) return;
    const std::size_t at = cur_.begin_offset();
    s.d1 = direction();
    cur_.expect("and");
    s.d2 = direction();
    if ((s.d1.x != 0) == (s.d2.x != 0)) {
      throw ParseError("rectangle directions must be perpendicular", at, cur_.end_offset_before());
    }
  }

  ShapeSpec rect_after_n(int n) {
    ShapeSpec s;
    s.n = n;
    cur_.expect("by");
    s.m = number();
    s.color_id = color();
    if (cur_.accept("square")) {
      s.kind = ShapeKind::Square;
    } else if (cur_.accept("rectangle")) {
      s.kind = ShapeKind::Rectangle;
    } else {
      cur_.fail("expected 'square' or 'rectangle'");
    }
    rect_directions(s);
    return s;
  }

  ShapeSpec shape() {
    ShapeSpec s;
    if (peek_number()) {
      const int n = number();
      if (cur_.peek_is("by")) return rect_after_n(n);
      s.n = n;
      s.color_id = color();
      if (!cur_.accept_in(kBlockNouns)) cur_.fail("expected 'blocks'");
      if (cur_.peek_is("in") && (cur_.peek_in(kRowNouns, 2) || cur_.peek_in(kColumnNouns, 2))) {
        cur_.expect("in");
        cur_.expect("a");
        if (cur_.accept_in(kRowNouns)) {
          s.kind = ShapeKind::Row;
          row_direction(s);
        } else {
          cur_.next();
          s.kind = ShapeKind::Column;
        }
        return s;
      }
      if (n != 1) cur_.fail("expected 'in a row' or 'in a column'");
      s.kind = ShapeKind::Single;
      return s;
    }
    cur_.accept("a") || cur_.accept("an");
    if (cur_.accept_in(kRowNouns)) {
      cur_.expect("of");
      s.kind = ShapeKind::Row;
      s.n = number();
      s.color_id = color();
      if (!cur_.accept_in(kBlockNouns)) cur_.fail("expected 'blocks'");
      row_direction(s);
      return s;
    }
    if (cur_.accept_in(kColumnNouns)) {
      cur_.expect("of");
      s.kind = ShapeKind::Column;
      s.n = number();
      s.color_id = color();
      if (!cur_.accept_in(kBlockNouns)) cur_.fail("expected 'blocks'");
      return s;
    }
    if (peek_number()) return rect_after_n(number());
    s.kind = ShapeKind::Single;
    s.color_id = color();
    if (!cur_.accept("block")) cur_.fail("expected 'block'");
    return s;
  }

  bool area_suffix() {
    const std::size_t save = cur_.pos();
    if (cur_.accept("of") && cur_.accept("the") && cur_.accept_in(kAreaWords)) return true;
    cur_.seek(save);
    return false;
  }

  // Attempts one anchor; restores the cursor and returns false on mismatch.
  bool anchor(Anchor& a, std::size_t& count) {
    const std::size_t save = cur_.pos();
    auto set_position = [&](AnchorKind kind, int k, Cell dir) {
      if (a.kind != AnchorKind::Default) {
        throw ParseError("conflicting position anchors", cur_.peek(0) ? tok_begin(save) : text_.size(),
                         cur_.end_offset_before());
      }
      a.kind = kind;
      a.k = k;
      a.dir = dir;
      ++count;
    };
    if ((cur_.peek_is("in") || cur_.peek_is("at")) && cur_.peek_is("the", 1) && cur_.peek_in(kCenterWords, 2)) {
      cur_.next();
      cur_.next();
      cur_.next();
      area_suffix();
      set_position(AnchorKind::Center, 0, {0, 0, 0});
      return true;
    }
    if (cur_.peek_is("on") && cur_.peek_is("top", 1) && cur_.peek_is("of", 2) && cur_.peek_is("it", 3)) {
      for (int i = 0; i < 4; ++i) cur_.next();
      set_position(AnchorKind::OnTop, 0, {0, 0, 0});
      return true;
    }
    if (cur_.peek_is("to") && cur_.peek_is("the", 1) && cur_.peek_in(kDirectionWords, 2) && cur_.peek_is("of", 3) &&
        cur_.peek_is("it", 4)) {
      cur_.next();
      cur_.next();
      const Cell d = direction();
      cur_.next();
      cur_.next();
      set_position(AnchorKind::FromIt, 1, d);
      return true;
    }
    const bool floating = cur_.accept("floating");
    if (peek_number() && cur_.peek_in(kUnitNouns, 1)) {
      const int k = number();
      cur_.next();
      if (cur_.accept("above")) {
        cur_.expect("the");
        cur_.expect("ground");
        if (a.elevation) throw ParseError("elevation given twice", tok_begin(save), cur_.end_offset_before());
        a.elevation = k;
        ++count;
        return true;
      }
      if (!floating && cur_.peek_in(kDirectionWords) && cur_.peek_is("of", 1)) {
        const Cell d = direction();
        cur_.next();
        if (cur_.accept("it")) {
          set_position(AnchorKind::FromIt, k, d);
          return true;
        }
        cur_.accept("the");
        if (cur_.accept_in(kCenterWords)) {
          area_suffix();
          set_position(AnchorKind::FromCenter, k, d);
          return true;
        }
        cur_.fail("expected 'center' or 'it'");
      }
    }
    if (floating) cur_.fail("expected 'K blocks above the ground'");
    cur_.seek(save);
    return false;
  }

  std::size_t tok_begin(std::size_t index) const {
    TokenCursor probe = cur_;
    probe.seek(index);
    return probe.begin_offset();
  }

  const PlacedStep& previous(std::size_t begin) const {
    if (placed_.empty()) throw ParseError("'it' has nothing to refer to", begin, cur_.end_offset_before());
    return placed_.back();
  }

  void step() {
    const std::size_t begin = cur_.begin_offset();
    if (cur_.accept_in(kDestroyVerbs)) {
      destroy(begin);
      return;
    }
    cur_.accept_in(kPlaceVerbs);
    const ShapeSpec s = shape();
    Anchor a;
    std::size_t count = 0;
    while (true) {
      const std::size_t save = cur_.pos();
      cur_.accept(",");
      if (!anchor(a, count)) {
        cur_.seek(save);
        break;
      }
    }
    place(s, a, begin);
  }

  void place(const ShapeSpec& s, const Anchor& a, std::size_t begin) {
    const std::size_t end = cur_.end_offset_before();
    const std::vector<Cell> rel = shape_cells(s);
    Cell lo = rel.front(), hi = rel.front();
    for (const Cell& c : rel) {
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y), std::min(lo.z, c.z)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y), std::max(hi.z, c.z)};
    }
    const Cell center{kCenterX, 0, kCenterZ};
    Cell origin = center;
    switch (a.kind) {
      case AnchorKind::Default:
      case AnchorKind::Center:
        break;
      case AnchorKind::FromCenter:
        origin = center + Cell{a.dir.x * a.k, 0, a.dir.z * a.k};
        break;
      case AnchorKind::OnTop: {
        const PlacedStep& p = previous(begin);
        int top = p.origin.y;
        for (std::size_t i = 0; i < p.cells.size(); ++i) {
          if (p.alive[i] && p.cells[i].cell.x == p.origin.x && p.cells[i].cell.z == p.origin.z)
            top = std::max(top, p.cells[i].cell.y);
        }
        origin = p.origin + Cell{0, top - p.origin.y + 1, 0};
        if (a.elevation) throw ParseError("'on top of it' conflicts with an elevation", begin, end);
        break;
      }
      case AnchorKind::FromIt: {
        const PlacedStep& p = previous(begin);
        Cell plo = p.cells.front().cell, phi = plo;
        for (const CoordEntry& e : p.cells) {
          plo = {std::min(plo.x, e.cell.x), 0, std::min(plo.z, e.cell.z)};
          phi = {std::max(phi.x, e.cell.x), 0, std::max(phi.z, e.cell.z)};
        }
        origin = p.origin;
        if (a.dir.x > 0) origin.x = phi.x + a.k - lo.x;
        if (a.dir.x < 0) origin.x = plo.x - a.k - hi.x;
        if (a.dir.z > 0) origin.z = phi.z + a.k - lo.z;
        if (a.dir.z < 0) origin.z = plo.z - a.k - hi.z;
        break;
      }
    }
    if (a.elevation) origin.y = *a.elevation;
    PlacedStep step{s.kind, origin, {}, {}};
    PlanStep plan;
    for (const Cell& r : rel) {
      const Cell c = origin + r;
      if (!gridbuild::in_bounds(c)) {
        throw ParseError("shape leaves the building volume at " + gridbuild::to_string(c), begin, end);
      }
      if (occupied_.count(c)) throw ParseError("shape overlaps a block at " + gridbuild::to_string(c), begin, end);
      occupied_[c] = s.color_id;
      step.cells.push_back({c, s.color_id});
      plan.entries.push_back({c, s.color_id});
    }
    step.alive.assign(step.cells.size(), true);
    placed_.push_back(std::move(step));
    steps_.push_back(std::move(plan));
  }

  void destroy(std::size_t begin) {
    PlanStep plan;
    plan.remove = true;
    auto kill = [&](PlacedStep& p, std::size_t i) {
      p.alive[i] = false;
      occupied_.erase(p.cells[i].cell);
      plan.entries.push_back({p.cells[i].cell, 0});
    };
    auto alive_any = [](const PlacedStep& p) { return std::find(p.alive.begin(), p.alive.end(), true) != p.alive.end(); };
    if (cur_.accept("it")) {
      if (placed_.empty() || !alive_any(placed_.back())) {
        throw ParseError("nothing left to destroy", begin, cur_.end_offset_before());
      }
      PlacedStep& p = placed_.back();
      for (std::size_t i = 0; i < p.cells.size(); ++i)
        if (p.alive[i]) kill(p, i);
      steps_.push_back(std::move(plan));
      return;
    }
    cur_.expect("the");
    static constexpr std::string_view kWhich[] = {"last", "first", "top", "bottom"};
    if (const auto which = cur_.accept_in(kWhich)) {
      if (!cur_.accept("block")) cur_.fail("expected 'block'");
      PlacedStep* target = nullptr;
      for (auto it = placed_.rbegin(); it != placed_.rend(); ++it) {
        if (alive_any(*it)) {
          target = &*it;
          break;
        }
      }
      if (!target) throw ParseError("nothing left to destroy", begin, cur_.end_offset_before());
      std::optional<std::size_t> pick;
      for (std::size_t i = 0; i < target->cells.size(); ++i) {
        if (!target->alive[i]) continue;
        if (!pick) {
          pick = i;
          continue;
        }
        const int y = target->cells[i].cell.y;
        const int best = target->cells[*pick].cell.y;
        if (*which == "last" || (*which == "top" && y >= best) || (*which == "bottom" && y < best)) pick = i;
      }
      kill(*target, *pick);
      steps_.push_back(std::move(plan));
      return;
    }
    const Token* t = cur_.peek();
    if (!t) cur_.fail("expected a shape to destroy");
    std::vector<ShapeKind> kinds;
    if (cur_.peek_in(kRowNouns)) kinds = {ShapeKind::Row};
    if (cur_.peek_in(kColumnNouns)) kinds = {ShapeKind::Column};
    if (t->text == "square") kinds = {ShapeKind::Square};
    if (t->text == "rectangle") kinds = {ShapeKind::Rectangle, ShapeKind::Square};
    if (t->text == "block") kinds = {ShapeKind::Single};
    if (kinds.empty()) cur_.fail("expected a shape to destroy");
    cur_.next();
    for (auto it = placed_.rbegin(); it != placed_.rend(); ++it) {
      if (std::find(kinds.begin(), kinds.end(), it->kind) == kinds.end() || !alive_any(*it)) continue;
      for (std::size_t i = 0; i < it->cells.size(); ++i)
        if (it->alive[i]) kill(*it, i);
      steps_.push_back(std::move(plan));
      return;
    }
    throw ParseError("no " + t->text + " to destroy", begin, cur_.end_offset_before());
  }

  std::string_view text_;
  TokenCursor cur_;
  std::vector<PlacedStep> placed_;
  std::vector<PlanStep> steps_;
  std::map<Cell, int> occupied_;
};

}  // namespace detail

// Compiles a building instruction into raw steps in world coordinates (no
// normalization).
inline std::vector<PlanStep> compile_gridbuild_steps(std::string_view instruction) {
  return detail::GridParser(instruction).parse();
}

// Compiles a building instruction into normalized steps.
inline std::vector<PlanStep> translate_gridbuild_steps(std::string_view instruction) {
  auto steps = compile_gridbuild_steps(instruction);
  try {
    return normalize_steps(std::move(steps));
  } catch (const NormalizeError& e) {
    throw ParseError(e.what(), 0, instruction.size());
  }
}

inline taskman::TaskPlan translate_gridbuild(std::string_view instruction, std::string source_id = {}) {
  taskman::TaskPlan plan;
  plan.source_id = std::move(source_id);
  plan.subtasks = to_subtasks(flatten(translate_gridbuild_steps(instruction)));
  return plan;
}

}  // namespace gcrl::lang
