#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/taskman/subtask.hpp"

namespace gcrl::lang {

using gridbuild::BlockSpec;
using gridbuild::Cell;

enum class Axis : std::uint8_t { X, Y, Z };

// Maps serialized tuple slots onto the canonical frame (x east, y up,
// z south).
struct AxisConvention {
  std::array<Axis, 3> slots = {Axis::Y, Axis::X, Axis::Z};

  // Dataset files: (up, east, south).
  static AxisConvention dataset() { return {{Axis::Y, Axis::X, Axis::Z}}; }
  // Coordinate-generation prompt frame: (south, east, up).
  static AxisConvention appendix() { return {{Axis::Z, Axis::X, Axis::Y}}; }

  void validate() const {
    std::array<int, 3> seen{};
    for (Axis a : slots) ++seen[static_cast<std::size_t>(a)];
    if (seen != std::array<int, 3>{1, 1, 1}) throw ConfigError("axis convention is not a permutation");
  }

  Cell to_canonical(const std::array<int, 3>& t) const {
    Cell c;
    for (std::size_t i = 0; i < 3; ++i) component(c, slots[i]) = t[i];
    return c;
  }

  std::array<int, 3> from_canonical(Cell c) const {
    std::array<int, 3> t{};
    for (std::size_t i = 0; i < 3; ++i) t[i] = component(c, slots[i]);
    return t;
  }

  static int& component(Cell& c, Axis a) { return a == Axis::X ? c.x : a == Axis::Y ? c.y : c.z; }
  static int component(const Cell& c, Axis a) { return a == Axis::X ? c.x : a == Axis::Y ? c.y : c.z; }
};

inline AxisConvention convention_from_name(std::string_view name) {
  if (name == "dataset") return AxisConvention::dataset();
  if (name == "appendix") return AxisConvention::appendix();
  throw ConfigError("unknown axis convention '" + std::string(name) + "'");
}

// One coords-format entry; color id 0 marks a removal.
struct CoordEntry {
  Cell cell;
  int color_id = 0;

  friend bool operator==(const CoordEntry&, const CoordEntry&) = default;
};

// Small cursor-based scanner shared by the coords and prims codecs.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  std::size_t pos() const { return pos_; }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    int value = 0;
    const char* first = text_.data() + start + (start < text_.size() && text_[start] == '+' ? 1 : 0);
    const auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || pos_ == start) {
      pos_ = start;
      fail("expected integer");
    }
    return value;
  }

  std::string word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected word");
    std::string w(text_.substr(start, pos_ - start));
    for (char& ch : w) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return w;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, pos_, std::min(pos_ + 1, text_.size()));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// Parses "(a, b, c, colorID), ..." into canonical entries.
inline std::vector<CoordEntry> parse_coords(std::string_view text, const AxisConvention& conv = {}) {
  conv.validate();
  std::vector<CoordEntry> out;
  Scanner s(text);
  if (s.at_end()) return out;
  do {
    s.skip_ws();
    const std::size_t start = s.pos();
    s.expect('(');
    std::array<int, 3> t{};
    for (int& v : t) {
      v = s.integer();
      s.expect(',');
    }
    const int color = s.integer();
    s.expect(')');
    if (color < 0 || color > gridbuild::kNumColors) {
      throw ParseError("invalid color id " + std::to_string(color), start, s.pos());
    }
    const Cell c = conv.to_canonical(t);
    if (!gridbuild::in_bounds(c)) throw ParseError("coordinate out of bounds", start, s.pos());
    out.push_back({c, color});
  } while (s.accept(','));
  if (!s.at_end()) s.fail("unexpected trailing input");
  return out;
}

inline std::string format_coords(const std::vector<CoordEntry>& entries, const AxisConvention& conv = {}) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto t = conv.from_canonical(entries[i].cell);
    if (i) out += ", ";
    out += "(" + std::to_string(t[0]) + ", " + std::to_string(t[1]) + ", " + std::to_string(t[2]) + ", " +
           std::to_string(entries[i].color_id) + ")";
  }
  return out;
}

inline std::vector<taskman::Subtask> to_subtasks(const std::vector<CoordEntry>& entries) {
  std::vector<taskman::Subtask> out;
  out.reserve(entries.size());
  for (const CoordEntry& e : entries) {
    if (e.color_id == 0) {
      out.emplace_back(taskman::RemoveBlock{e.cell});
    } else {
      out.emplace_back(taskman::PlaceBlock{{e.cell, gridbuild::color_from_id(e.color_id)}});
    }
  }
  return out;
}

inline std::vector<CoordEntry> to_coord_entries(const std::vector<taskman::Subtask>& subtasks) {
  std::vector<CoordEntry> out;
  for (const auto& s : subtasks) {
    if (const auto* p = std::get_if<taskman::PlaceBlock>(&s)) {
      out.push_back({p->block.cell, gridbuild::color_id(p->block.color)});
    } else if (const auto* r = std::get_if<taskman::RemoveBlock>(&s)) {
      out.push_back({r->cell, 0});
    } else {
      throw ConfigError("achievement subtask has no coords encoding");
    }
  }
  return out;
}

}  // namespace gcrl::lang
