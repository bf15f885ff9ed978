#pragma once

#include <array>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/lang/codec.hpp"
#include "gcrl/lang/grammar.hpp"

namespace gcrl::lang {

struct Sample {
  std::string instruction;
  std::vector<CoordEntry> blocks;
  bool aligned = true;  // false when the text could not follow the blocks

  friend bool operator==(const Sample&, const Sample&) = default;
};

// Replaces whole alphabetic words (case-insensitive) in one pass, keeping the
// capitalization of the first letter.
inline std::string replace_words(std::string_view text, const std::map<std::string, std::string>& table) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!std::isalpha(static_cast<unsigned char>(text[i]))) {
      out += text[i++];
      continue;
    }
    const std::size_t start = i;
    while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) ++i;
    const std::string_view word = text.substr(start, i - start);
    std::string lower(word);
    for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    const auto it = table.find(lower);
    if (it == table.end()) {
      out += word;
      continue;
    }
    std::string rep = it->second;
    if (std::isupper(static_cast<unsigned char>(word[0])) && !rep.empty()) {
      rep[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(rep[0])));
    }
    out += rep;
  }
  return out;
}

inline Cell rotate180(Cell c) { return {gridbuild::kSizeX - 1 - c.x, c.y, gridbuild::kSizeZ - 1 - c.z}; }

inline bool is_grammar_instruction(std::string_view text) {
  try {
    compile_gridbuild_steps(text);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

// Half-turn about the vertical axis through the grid center.
inline Sample augment_rotate180(const Sample& s) {
  Sample out = s;
  for (CoordEntry& e : out.blocks) e.cell = rotate180(e.cell);
  if (is_grammar_instruction(s.instruction)) {
    static const std::map<std::string, std::string> swaps = {
        {"north", "south"}, {"south", "north"}, {"east", "west"}, {"west", "east"}};
    out.instruction = replace_words(s.instruction, swaps);
  } else {
    out.aligned = false;
  }
  return out;
}

// mapping[c] is the new id for color id c (1..6). Must be a bijection.
using ColorMapping = std::array<int, gridbuild::kNumColors + 1>;

inline ColorMapping identity_mapping() {
  ColorMapping m{};
  for (int i = 0; i <= gridbuild::kNumColors; ++i) m[i] = i;
  return m;
}

inline void validate_mapping(const ColorMapping& m) {
  if (m[0] != 0) throw ConfigError("color mapping must keep removal markers");
  std::array<bool, gridbuild::kNumColors + 1> hit{};
  for (int i = 1; i <= gridbuild::kNumColors; ++i) {
    if (!gridbuild::valid_color_id(m[i])) throw ConfigError("color mapping has an invalid target");
    if (hit[m[i]]) throw ConfigError("color mapping is not a bijection");
    hit[m[i]] = true;
  }
}

inline ColorMapping compose(const ColorMapping& second, const ColorMapping& first) {
  ColorMapping m{};
  for (int i = 0; i <= gridbuild::kNumColors; ++i) m[i] = second[first[i]];
  return m;
}

// Parses "red=blue,blue=red" style pairs; unspecified colors map to
// themselves.
inline ColorMapping parse_mapping(std::string_view spec) {
  ColorMapping m = identity_mapping();
  std::size_t i = 0;
  while (i < spec.size()) {
    std::size_t j = spec.find(',', i);
    if (j == std::string_view::npos) j = spec.size();
    const std::string_view pair = spec.substr(i, j - i);
    const std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos) throw ConfigError("color mapping entry '" + std::string(pair) + "' lacks '='");
    const auto from = gridbuild::color_from_name(pair.substr(0, eq));
    const auto to = gridbuild::color_from_name(pair.substr(eq + 1));
    if (!from || !to) throw ConfigError("unknown color in mapping entry '" + std::string(pair) + "'");
    m[gridbuild::color_id(*from)] = gridbuild::color_id(*to);
    i = j + 1;
  }
  validate_mapping(m);
  return m;
}

inline Sample augment_recolor(const Sample& s, const ColorMapping& mapping) {
  validate_mapping(mapping);
  Sample out = s;
  for (CoordEntry& e : out.blocks) e.color_id = mapping[e.color_id];
  std::map<std::string, std::string> table;
  for (int i = 1; i <= gridbuild::kNumColors; ++i) {
    table[std::string(gridbuild::kColorNames[i - 1])] = std::string(gridbuild::kColorNames[mapping[i] - 1]);
  }
  out.instruction = replace_words(s.instruction, table);
  return out;
}

}  // namespace gcrl::lang
