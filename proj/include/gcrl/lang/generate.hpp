#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/rng.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/lang/grammar.hpp"
#include "gcrl/lang/lexicon.hpp"
#include "gcrl/techlite/types.hpp"

namespace gcrl::lang {

// Random instructions drawn from the building and survival mini-languages.
// Every generated string compiles with the matching translator; callers
// retry on the rare draw that leaves the volume.

namespace detail {

template <class T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
  return items[rng.below(N)];
}

inline std::string pick_color(Rng& rng) { return std::string(gridbuild::kColorNames[rng.below(gridbuild::kNumColors)]); }

inline std::string pick_other_color(Rng& rng, const std::string& not_this) {
  std::string c;
  do c = pick_color(rng);
  while (c == not_this);
  return c;
}

inline std::string count_text(Rng& rng, int n) { return rng.bernoulli(0.5) ? number_word(n) : std::to_string(n); }

inline std::string blocks_away(Rng& rng, int k) {
  return count_text(rng, k) + (k == 1 ? " block " : " blocks ");
}

inline std::string pick_dir(Rng& rng) {
  static constexpr std::array<std::string_view, 4> dirs = {"north", "south", "east", "west"};
  return std::string(pick(rng, dirs));
}

inline std::string perpendicular(Rng& rng, const std::string& d) {
  if (d == "north" || d == "south") return rng.bernoulli(0.5) ? "east" : "west";
  return rng.bernoulli(0.5) ? "north" : "south";
}

inline std::string verb(Rng& rng) {
  static constexpr std::array<std::string_view, 5> verbs = {"place", "build", "put", "make", "add"};
  return std::string(pick(rng, verbs));
}

inline std::string row_phrase(Rng& rng, int n, const std::string& color, const std::string& dir) {
  if (rng.bernoulli(0.5)) return count_text(rng, n) + " " + color + " blocks in a row going " + dir;
  return "a row of " + count_text(rng, n) + " " + color + " blocks going " + dir;
}

inline std::string column_phrase(Rng& rng, int n, const std::string& color) {
  static constexpr std::array<std::string_view, 3> nouns = {"column", "tower", "pillar"};
  return "a " + std::string(pick(rng, nouns)) + " of " + count_text(rng, n) + " " + color + " blocks";
}

inline std::string rect_phrase(Rng& rng, int n, int m, const std::string& color) {
  const std::string d1 = pick_dir(rng);
  const std::string d2 = perpendicular(rng, d1);
  const char* noun = n == m ? "square" : "rectangle";
  return "a " + count_text(rng, n) + " by " + count_text(rng, m) + " " + color + " " + noun + " going " + d1 + " and " +
         d2;
}

inline std::string center_anchor(Rng& rng) {
  static constexpr std::array<std::string_view, 3> forms = {"in the middle of the grid", "in the middle",
                                                            "in the center"};
  return std::string(pick(rng, forms));
}

inline std::string offset_anchor(Rng& rng) {
  const int k = rng.uniform_int(1, 3);
  return count_text(rng, k) + (k == 1 ? " row " : " rows ") + pick_dir(rng) + " of center";
}

inline std::string position(Rng& rng) { return rng.bernoulli(0.5) ? center_anchor(rng) : offset_anchor(rng); }

inline std::string joiner(Rng& rng) {
  static constexpr std::array<std::string_view, 3> j = {", then ", ". Then ", " then "};
  return std::string(pick(rng, j));
}

}  // namespace detail

inline std::string generate_gridbuild_instruction(Rng& rng) {
  using namespace detail;
  const std::string c1 = pick_color(rng);
  const std::string c2 = pick_other_color(rng, c1);
  std::string s;
  switch (rng.below(9)) {
    case 0:  // floor row
      s = verb(rng) + " " + row_phrase(rng, rng.uniform_int(3, 6), c1, pick_dir(rng)) + ", " + position(rng);
      break;
    case 1: {  // floor square or rectangle
      const int n = rng.uniform_int(2, 4);
      const int m = rng.bernoulli(0.5) ? n : rng.uniform_int(2, 4);
      s = verb(rng) + " " + rect_phrase(rng, n, m, c1) + " " + center_anchor(rng);
      break;
    }
    case 2:  // two rows side by side
      s = verb(rng) + " " + row_phrase(rng, rng.uniform_int(3, 5), c1, "east") + " " + center_anchor(rng) +
          joiner(rng) + verb(rng) + " " + row_phrase(rng, rng.uniform_int(3, 5), c2, "east") + ", " +
          blocks_away(rng, rng.uniform_int(1, 2)) + (rng.bernoulli(0.5) ? "north" : "south") + " of it";
      break;
    case 3:  // tower
      s = verb(rng) + " " + column_phrase(rng, rng.uniform_int(3, 6), c1) + " " + center_anchor(rng);
      break;
    case 4:  // two towers
      s = verb(rng) + " " + column_phrase(rng, rng.uniform_int(3, 5), c1) + " " + center_anchor(rng) + joiner(rng) +
          verb(rng) + " " + column_phrase(rng, rng.uniform_int(2, 5), c2) + " " +
          blocks_away(rng, rng.uniform_int(1, 3)) + pick_dir(rng) + " of it";
      break;
    case 5:  // row with a tower on top
      s = verb(rng) + " " + row_phrase(rng, rng.uniform_int(3, 5), c1, pick_dir(rng)) + " " + center_anchor(rng) +
          joiner(rng) + verb(rng) + " " + column_phrase(rng, rng.uniform_int(2, 4), c2) + " on top of it";
      break;
    case 6:  // floating row: support, build on top, remove support
      s = verb(rng) + " " + column_phrase(rng, rng.uniform_int(2, 4), c1) + " " + center_anchor(rng) + joiner(rng) +
          verb(rng) + " " + row_phrase(rng, rng.uniform_int(2, 4), c2, pick_dir(rng)) + " on top of it" +
          joiner(rng) + "destroy the column";
      break;
    case 7:  // floating slab
      s = verb(rng) + " " + column_phrase(rng, rng.uniform_int(2, 3), c1) + " " + center_anchor(rng) + joiner(rng) +
          verb(rng) + " " + rect_phrase(rng, rng.uniform_int(2, 3), rng.uniform_int(2, 3), c2) + " on top of it" +
          joiner(rng) + "remove the column";
      break;
    default:  // tower trimmed from the top, plus a block beside it
      s = verb(rng) + " " + column_phrase(rng, rng.uniform_int(3, 5), c1) + " " + center_anchor(rng) + joiner(rng) +
          "destroy the top block" + joiner(rng) + "put a " + c2 + " block to the " + pick_dir(rng) + " of it";
      break;
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s + ".";
}

namespace detail {

struct AchievementWording {
  std::vector<std::string_view> verbs;
  std::vector<std::string_view> objects;
  bool countable = false;
};

inline const AchievementWording& wording(techlite::Achievement a) {
  using A = techlite::Achievement;
  static const std::vector<std::pair<A, AchievementWording>> table = {
      {A::CollectWood, {{"collect", "gather", "chop", "harvest"}, {"wood", "timber", "logs"}, true}},
      {A::CollectStone, {{"collect", "mine", "gather"}, {"stone", "rocks", "cobblestone"}, true}},
      {A::CollectCoal, {{"collect", "mine", "gather"}, {"coal", "lumps of coal"}, true}},
      {A::CollectIron, {{"collect", "gather", "mine", "obtain"}, {"iron", "metallic mineral", "mithril"}, true}},
      {A::CollectDiamond, {{"collect", "mine", "acquire"}, {"diamond", "gems", "precious gem"}, true}},
      {A::CollectSapling, {{"collect", "gather", "fetch"}, {"sapling", "seedling"}, true}},
      {A::CollectDrink, {{"drink", "collect"}, {"water", "fresh water"}, false}},
      {A::PlaceTable, {{"place", "build", "set up"}, {"a table", "a crafting table", "a workbench"}, false}},
      {A::PlaceStone, {{"place", "put down"}, {"a stone", "a rock"}, false}},
      {A::PlaceFurnace, {{"place", "build", "erect"}, {"a furnace", "a kiln"}, false}},
      {A::PlacePlant, {{"plant"}, {"a sapling", "a seedling"}, false}},
      {A::MakeWoodPickaxe, {{"make", "craft", "fashion"}, {"a wood pickaxe", "a wooden pickaxe", "a pickaxe of wood"}, false}},
      {A::MakeWoodSword, {{"make", "craft", "fashion"}, {"a wood sword", "a wooden blade", "a sword of wood"}, false}},
      {A::MakeStonePickaxe, {{"make", "craft"}, {"a stone pickaxe", "a pickaxe of stone"}, false}},
      {A::MakeStoneSword, {{"make", "craft"}, {"a stone sword", "a blade of stone"}, false}},
      {A::MakeIronPickaxe, {{"make", "craft", "forge"}, {"an iron pickaxe", "a pickaxe of iron"}, false}},
      {A::MakeIronSword, {{"make", "craft", "forge"}, {"an iron sword", "an iron weapon", "a blade of iron"}, false}},
      {A::EatCow, {{"eat", "consume", "devour"}, {"a cow", "the cow"}, false}},
      {A::EatPlant, {{"eat", "consume"}, {"a ripe plant", "the plant"}, false}},
      {A::DefeatZombie, {{"defeat", "vanquish", "slay"}, {"a zombie", "the undead foe", "the wights"}, false}},
      {A::DefeatSkeleton, {{"defeat", "vanquish", "slay"}, {"a skeleton", "the bony archer"}, false}},
      {A::WakeUp, {{"sleep", "wake up", "rest"}, {""}, false}},
  };
  for (const auto& [k, w] : table) {
    if (k == a) return w;
  }
  throw ConfigError("no wording for achievement");
}

template <class T>
const T& pick_vec(Rng& rng, const std::vector<T>& v) {
  return v[rng.below(v.size())];
}

inline std::string achievement_phrase(Rng& rng, const taskman::Achieve& a) {
  const AchievementWording& w = wording(a.achievement);
  std::string s(pick_vec(rng, w.verbs));
  const std::string_view obj = pick_vec(rng, w.objects);
  if (obj.empty()) return s;
  if (w.countable) {
    if (a.count == 1) return s + (rng.bernoulli(0.5) ? " a single unit of " : " ") + std::string(obj);
    if (rng.bernoulli(0.3)) return s + " " + std::string(obj) + " with count " + std::to_string(a.count);
    return s + " " + count_text(rng, a.count) + " " + std::string(obj);
  }
  return s + " " + std::string(obj);
}

}  // namespace detail

// Random achievement list of 1..max_len distinct entries.
inline taskman::TaskPlan random_achievement_plan(Rng& rng, int max_len = 3) {
  taskman::TaskPlan plan;
  const int len = rng.uniform_int(1, max_len);
  std::vector<int> used;
  while (static_cast<int>(plan.subtasks.size()) < len) {
    const int idx = static_cast<int>(rng.below(techlite::kNumAchievements));
    if (std::find(used.begin(), used.end(), idx) != used.end()) continue;
    used.push_back(idx);
    const auto a = static_cast<techlite::Achievement>(idx);
    const int count = detail::wording(a).countable ? rng.uniform_int(1, 3) : 1;
    plan.subtasks.emplace_back(taskman::Achieve{a, count});
  }
  return plan;
}

inline std::string render_techlite_instruction(Rng& rng, const taskman::TaskPlan& plan) {
  std::vector<std::string> parts;
  for (const auto& s : plan.subtasks) parts.push_back(detail::achievement_phrase(rng, std::get<taskman::Achieve>(s)));
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += (i + 1 == parts.size()) ? (parts.size() > 2 ? ", and " : " and ") : ", ";
    out += parts[i];
  }
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out + ".";
}

}  // namespace gcrl::lang
