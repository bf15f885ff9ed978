#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/lang/tokens.hpp"
#include "gcrl/taskman/subtask.hpp"
#include "gcrl/techlite/types.hpp"

namespace gcrl::lang {

using techlite::Achievement;

enum class VerbClass { Collect, Drink, Place, Make, Eat, Defeat, Sleep };

enum class Thing {
  Wood, Stone, Coal, Iron, Diamond, Sapling, Water,
  Table, Furnace, Plant, Cow, Zombie, Skeleton,
  WoodPickaxe, WoodSword, StonePickaxe, StoneSword, IronPickaxe, IronSword,
};

struct Phrase {
  std::string_view text;  // space separated
  int value;
};

// clang-format off
inline constexpr Phrase kVerbs[] = {
    {"collect", int(VerbClass::Collect)}, {"gather", int(VerbClass::Collect)}, {"get", int(VerbClass::Collect)},
    {"obtain", int(VerbClass::Collect)},  {"harvest", int(VerbClass::Collect)}, {"mine", int(VerbClass::Collect)},
    {"acquire", int(VerbClass::Collect)}, {"fetch", int(VerbClass::Collect)},   {"chop", int(VerbClass::Collect)},
    {"drink", int(VerbClass::Drink)},     {"sip", int(VerbClass::Drink)},       {"quaff", int(VerbClass::Drink)},
    {"place", int(VerbClass::Place)},     {"put", int(VerbClass::Place)},       {"set", int(VerbClass::Place)},
    {"build", int(VerbClass::Place)},     {"erect", int(VerbClass::Place)},     {"plant", int(VerbClass::Place)},
    {"put down", int(VerbClass::Place)},  {"set up", int(VerbClass::Place)},
    {"make", int(VerbClass::Make)},       {"craft", int(VerbClass::Make)},      {"forge", int(VerbClass::Make)},
    {"create", int(VerbClass::Make)},     {"fashion", int(VerbClass::Make)},
    {"eat", int(VerbClass::Eat)},         {"consume", int(VerbClass::Eat)},     {"devour", int(VerbClass::Eat)},
    {"defeat", int(VerbClass::Defeat)},   {"vanquish", int(VerbClass::Defeat)}, {"slay", int(VerbClass::Defeat)},
    {"kill", int(VerbClass::Defeat)},     {"fight", int(VerbClass::Defeat)},    {"destroy", int(VerbClass::Defeat)},
    {"sleep", int(VerbClass::Sleep)},     {"rest", int(VerbClass::Sleep)},      {"wake up", int(VerbClass::Sleep)},
    {"awaken", int(VerbClass::Sleep)},    {"take a nap", int(VerbClass::Sleep)},
};

inline constexpr Phrase kThings[] = {
    {"wood", int(Thing::Wood)},            {"timber", int(Thing::Wood)},        {"log", int(Thing::Wood)},
    {"logs", int(Thing::Wood)},            {"lumber", int(Thing::Wood)},
    {"stone", int(Thing::Stone)},          {"stones", int(Thing::Stone)},       {"rock", int(Thing::Stone)},
    {"rocks", int(Thing::Stone)},          {"cobblestone", int(Thing::Stone)},
    {"coal", int(Thing::Coal)},            {"coals", int(Thing::Coal)},         {"charcoal", int(Thing::Coal)},
    {"iron", int(Thing::Iron)},            {"iron ore", int(Thing::Iron)},      {"metallic mineral", int(Thing::Iron)},
    {"metallic minerals", int(Thing::Iron)}, {"mithril", int(Thing::Iron)},     {"ore", int(Thing::Iron)},
    {"diamond", int(Thing::Diamond)},      {"diamonds", int(Thing::Diamond)},   {"gem", int(Thing::Diamond)},
    {"gems", int(Thing::Diamond)},         {"precious gem", int(Thing::Diamond)},
    {"sapling", int(Thing::Sapling)},      {"saplings", int(Thing::Sapling)},   {"seedling", int(Thing::Sapling)},
    {"seedlings", int(Thing::Sapling)},
    {"water", int(Thing::Water)},          {"fresh water", int(Thing::Water)},
    {"table", int(Thing::Table)},          {"crafting table", int(Thing::Table)}, {"workbench", int(Thing::Table)},
    {"furnace", int(Thing::Furnace)},      {"kiln", int(Thing::Furnace)},       {"smelter", int(Thing::Furnace)},
    {"plant", int(Thing::Plant)},          {"plants", int(Thing::Plant)},       {"crop", int(Thing::Plant)},
    {"ripe plant", int(Thing::Plant)},
    {"cow", int(Thing::Cow)},              {"cows", int(Thing::Cow)},           {"cattle", int(Thing::Cow)},
    {"zombie", int(Thing::Zombie)},        {"zombies", int(Thing::Zombie)},     {"undead foe", int(Thing::Zombie)},
    {"undead foes", int(Thing::Zombie)},   {"undead", int(Thing::Zombie)},      {"wight", int(Thing::Zombie)},
    {"wights", int(Thing::Zombie)},        {"ghoul", int(Thing::Zombie)},
    {"skeleton", int(Thing::Skeleton)},    {"skeletons", int(Thing::Skeleton)}, {"bony archer", int(Thing::Skeleton)},
    {"bony archers", int(Thing::Skeleton)},
};

// Material and tool words; a tool is "MATERIAL TOOL" or "TOOL of MATERIAL".
inline constexpr Phrase kMaterials[] = {
    {"wood", 0}, {"wooden", 0}, {"timber", 0}, {"stone", 1}, {"rock", 1}, {"iron", 2}, {"metal", 2}, {"mithril", 2},
};
inline constexpr Phrase kTools[] = {
    {"pickaxe", 0}, {"pickaxes", 0}, {"pick", 0}, {"sword", 1}, {"swords", 1}, {"blade", 1}, {"weapon", 1},
};

inline constexpr std::string_view kFillers[] = {
    "the", "a", "an", "some", "single", "unit", "units", "piece", "pieces", "nugget", "nuggets", "chunk", "chunks",
    "lump", "lumps", "of", "bit", "bits", "your", "new", "fresh", "more", "down", "yourself", "until", "you",
};
// clang-format on

inline constexpr std::string_view kClauseSeparators[] = {",", ".", ";", "!", "and", "then", "finally", "next"};

namespace detail {

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t j = s.find(' ', i);
    out.emplace_back(s.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

// Length of the longest phrase matching at `at`; writes its value.
template <std::size_t N>
std::size_t longest_match(const Phrase (&table)[N], const std::vector<Token>& toks, std::size_t at, int& value) {
  std::size_t best = 0;
  for (const Phrase& p : table) {
    const auto words = split_words(p.text);
    if (words.size() <= best || at + words.size() > toks.size()) continue;
    bool ok = true;
    for (std::size_t k = 0; k < words.size() && ok; ++k) ok = toks[at + k].text == words[k];
    if (ok) {
      best = words.size();
      value = p.value;
    }
  }
  return best;
}

inline Thing tool_thing(int material, int tool) {
  static constexpr Thing table[3][2] = {{Thing::WoodPickaxe, Thing::WoodSword},
                                        {Thing::StonePickaxe, Thing::StoneSword},
                                        {Thing::IronPickaxe, Thing::IronSword}};
  return table[material][tool];
}

inline std::optional<Achievement> resolve(VerbClass v, std::optional<Thing> t) {
  using A = Achievement;
  if (v == VerbClass::Sleep) return t ? std::nullopt : std::optional<A>(A::WakeUp);
  if (!t) return std::nullopt;
  switch (v) {
    case VerbClass::Collect:
      switch (*t) {
        case Thing::Wood: return A::CollectWood;
        case Thing::Stone: return A::CollectStone;
        case Thing::Coal: return A::CollectCoal;
        case Thing::Iron: return A::CollectIron;
        case Thing::Diamond: return A::CollectDiamond;
        case Thing::Sapling: return A::CollectSapling;
        case Thing::Water: return A::CollectDrink;
        default: return std::nullopt;
      }
    case VerbClass::Drink:
      return *t == Thing::Water ? std::optional<A>(A::CollectDrink) : std::nullopt;
    case VerbClass::Place:
      switch (*t) {
        case Thing::Table: return A::PlaceTable;
        case Thing::Stone: return A::PlaceStone;
        case Thing::Furnace: return A::PlaceFurnace;
        case Thing::Plant:
        case Thing::Sapling: return A::PlacePlant;
        default: return std::nullopt;
      }
    case VerbClass::Make:
      switch (*t) {
        case Thing::WoodPickaxe: return A::MakeWoodPickaxe;
        case Thing::WoodSword: return A::MakeWoodSword;
        case Thing::StonePickaxe: return A::MakeStonePickaxe;
        case Thing::StoneSword: return A::MakeStoneSword;
        case Thing::IronPickaxe: return A::MakeIronPickaxe;
        case Thing::IronSword: return A::MakeIronSword;
        case Thing::Table: return A::PlaceTable;
        case Thing::Furnace: return A::PlaceFurnace;
        default: return std::nullopt;
      }
    case VerbClass::Eat:
      if (*t == Thing::Cow) return A::EatCow;
      if (*t == Thing::Plant) return A::EatPlant;
      return std::nullopt;
    case VerbClass::Defeat:
      if (*t == Thing::Zombie) return A::DefeatZombie;
      if (*t == Thing::Skeleton) return A::DefeatSkeleton;
      return std::nullopt;
    case VerbClass::Sleep:
      break;
  }
  return std::nullopt;
}

inline taskman::Achieve parse_clause(const std::vector<Token>& toks) {
  const auto span_fail = [&](const std::string& what, std::size_t a, std::size_t b) -> ParseError {
    return ParseError(what, toks[a].begin, toks[b - 1].end);
  };
  int verb_value = 0;
  const std::size_t vlen = longest_match(kVerbs, toks, 0, verb_value);
  if (vlen == 0) throw span_fail("unknown verb '" + toks[0].text + "'", 0, 1);
  const auto verb = static_cast<VerbClass>(verb_value);
  std::optional<Thing> thing;
  std::optional<int> count;
  std::size_t thing_at = 0;
  std::size_t i = vlen;
  auto set_thing = [&](Thing t, std::size_t at, std::size_t len) {
    if (thing) throw span_fail("more than one object in one phrase", at, at + len);
    thing = t;
    thing_at = at;
  };
  auto set_count = [&](int c, std::size_t at) {
    if (count) throw span_fail("count given twice", at, at + 1);
    if (c < 1) throw span_fail("count must be positive", at, at + 1);
    count = c;
  };
  while (i < toks.size()) {
    int mat = 0, tool = 0;
    if (longest_match(kMaterials, toks, i, mat) == 1 && i + 1 < toks.size() &&
        longest_match(kTools, toks, i + 1, tool) == 1) {
      set_thing(tool_thing(mat, tool), i, 2);
      i += 2;
      continue;
    }
    if (longest_match(kTools, toks, i, tool) == 1 && i + 2 < toks.size() && toks[i + 1].text == "of" &&
        longest_match(kMaterials, toks, i + 2, mat) == 1) {
      set_thing(tool_thing(mat, tool), i, 3);
      i += 3;
      continue;
    }
    if (toks[i].text == "with" && i + 2 < toks.size() && toks[i + 1].text == "count") {
      const auto v = number_value(toks[i + 2].text);
      if (!v) throw span_fail("expected a number", i + 2, i + 3);
      set_count(*v, i + 2);
      i += 3;
      continue;
    }
    int value = 0;
    if (const std::size_t len = longest_match(kThings, toks, i, value)) {
      set_thing(static_cast<Thing>(value), i, len);
      i += len;
      continue;
    }
    if (const auto v = number_value(toks[i].text)) {
      set_count(*v, i);
      ++i;
      continue;
    }
    if (std::find(std::begin(kFillers), std::end(kFillers), toks[i].text) != std::end(kFillers)) {
      ++i;
      continue;
    }
    if (longest_match(kTools, toks, i, tool)) throw span_fail("tool '" + toks[i].text + "' needs a material", i, i + 1);
    throw span_fail("unknown word '" + toks[i].text + "'", i, i + 1);
  }
  const auto a = resolve(verb, thing);
  if (!a) {
    if (!thing && verb != VerbClass::Sleep) throw span_fail("phrase has no object", 0, toks.size());
    throw span_fail("object does not fit the verb", thing ? thing_at : 0, toks.size());
  }
  return {*a, count.value_or(1)};
}

}  // namespace detail

// Compiles a comma/"and"/"then" separated list of verb phrases into
// achievement subtasks.
inline taskman::TaskPlan translate_techlite(std::string_view instruction, std::string source_id = {}) {
  const std::vector<Token> toks = tokenize(instruction);
  taskman::TaskPlan plan;
  plan.source_id = std::move(source_id);
  std::vector<Token> clause;
  auto flush = [&] {
    if (!clause.empty()) plan.subtasks.emplace_back(detail::parse_clause(clause));
    clause.clear();
  };
  for (const Token& t : toks) {
    const bool sep = std::find(std::begin(kClauseSeparators), std::end(kClauseSeparators), t.text) !=
                     std::end(kClauseSeparators);
    if (sep) {
      flush();
    } else {
      clause.push_back(t);
    }
  }
  flush();
  if (plan.subtasks.empty()) throw ParseError("empty instruction", 0, instruction.size());
  return plan;
}

// "name" or "name:count".
inline taskman::Achieve parse_achievement_entry(std::string_view entry) {
  const std::size_t colon = entry.find(':');
  const std::string_view name = entry.substr(0, colon);
  const auto a = techlite::achievement_from_name(name);
  if (!a) throw ParseError("unknown achievement '" + std::string(name) + "'", 0, name.size());
  int count = 1;
  if (colon != std::string_view::npos) {
    const auto v = number_value(entry.substr(colon + 1));
    if (!v || *v < 1) throw ParseError("invalid count", colon + 1, entry.size());
    count = *v;
  }
  return {*a, count};
}

inline std::string format_achievement_entry(const taskman::Achieve& a) {
  std::string out(techlite::achievement_name(a.achievement));
  if (a.count > 1 || techlite::collected_resource(a.achievement)) out += ":" + std::to_string(a.count);
  return out;
}

}  // namespace gcrl::lang
