#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace gcrl::techlite {

enum class Achievement : std::uint8_t {
  CollectWood,
  CollectStone,
  CollectCoal,
  CollectIron,
  CollectDiamond,
  CollectSapling,
  CollectDrink,
  PlaceTable,
  PlaceStone,
  PlaceFurnace,
  PlacePlant,
  MakeWoodPickaxe,
  MakeWoodSword,
  MakeStonePickaxe,
  MakeStoneSword,
  MakeIronPickaxe,
  MakeIronSword,
  EatCow,
  EatPlant,
  DefeatZombie,
  DefeatSkeleton,
  WakeUp,
};

inline constexpr int kNumAchievements = 22;

inline constexpr std::array<std::string_view, kNumAchievements> kAchievementNames = {
    "collect_wood",      "collect_stone",     "collect_coal",     "collect_iron",     "collect_diamond",
    "collect_sapling",   "collect_drink",     "place_table",      "place_stone",      "place_furnace",
    "place_plant",       "make_wood_pickaxe", "make_wood_sword",  "make_stone_pickaxe", "make_stone_sword",
    "make_iron_pickaxe", "make_iron_sword",   "eat_cow",          "eat_plant",        "defeat_zombie",
    "defeat_skeleton",   "wake_up"};

inline std::string_view achievement_name(Achievement a) { return kAchievementNames[static_cast<std::size_t>(a)]; }

inline std::optional<Achievement> achievement_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kAchievementNames.size(); ++i) {
    if (kAchievementNames[i] == name) return static_cast<Achievement>(i);
  }
  return std::nullopt;
}

inline int achievement_index(Achievement a) { return static_cast<int>(a); }

enum class Resource : std::uint8_t { Wood, Stone, Coal, Iron, Diamond, Sapling, Drink };

inline constexpr std::array<std::string_view, 7> kResourceNames = {"wood",    "stone",   "coal", "iron",
                                                                   "diamond", "sapling", "drink"};

inline std::string_view resource_name(Resource r) { return kResourceNames[static_cast<std::size_t>(r)]; }

// Resource whose collection event counts toward a collect_* achievement.
inline std::optional<Resource> collected_resource(Achievement a) {
  switch (a) {
    case Achievement::CollectWood: return Resource::Wood;
    case Achievement::CollectStone: return Resource::Stone;
    case Achievement::CollectCoal: return Resource::Coal;
    case Achievement::CollectIron: return Resource::Iron;
    case Achievement::CollectDiamond: return Resource::Diamond;
    case Achievement::CollectSapling: return Resource::Sapling;
    case Achievement::CollectDrink: return Resource::Drink;
    default: return std::nullopt;
  }
}

enum class Tile : std::uint8_t { Grass, Water, Stone, Path, Tree, Coal, Iron, Diamond, Table, Furnace, Plant };

inline constexpr int kNumTiles = 11;

enum class Creature : std::uint8_t { None, Cow, Zombie, Skeleton };

// Inventory slots. Materials first, then tools.
enum class Item : std::uint8_t {
  Wood,
  Stone,
  Coal,
  Iron,
  Diamond,
  Sapling,
  WoodPickaxe,
  StonePickaxe,
  IronPickaxe,
  WoodSword,
  StoneSword,
  IronSword,
};

inline constexpr int kNumItems = 12;

enum class TechAction : std::uint8_t {
  Noop,
  MoveWest,
  MoveEast,
  MoveNorth,
  MoveSouth,
  Do,
  Sleep,
  PlaceStone,
  PlaceTable,
  PlaceFurnace,
  PlacePlant,
  MakeWoodPickaxe,
  MakeStonePickaxe,
  MakeIronPickaxe,
  MakeWoodSword,
  MakeStoneSword,
  MakeIronSword,
};

inline constexpr int kNumActions = 17;

inline constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "noop",          "move_west",         "move_east",          "move_north",        "move_south",     "do",
    "sleep",         "place_stone",       "place_table",        "place_furnace",     "place_plant",
    "make_wood_pickaxe", "make_stone_pickaxe", "make_iron_pickaxe", "make_wood_sword", "make_stone_sword",
    "make_iron_sword"};

inline std::string_view action_name(TechAction a) { return kActionNames[static_cast<std::size_t>(a)]; }

inline std::optional<TechAction> action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<TechAction>(i);
  }
  return std::nullopt;
}

struct Pos {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pos&, const Pos&) = default;
  friend Pos operator+(Pos a, Pos b) { return {a.x + b.x, a.y + b.y}; }
};

enum class Facing : std::uint8_t { West, East, North, South };

inline Pos facing_offset(Facing f) {
  switch (f) {
    case Facing::West: return {-1, 0};
    case Facing::East: return {1, 0};
    case Facing::North: return {0, -1};
    case Facing::South: return {0, 1};
  }
  return {};
}

}  // namespace gcrl::techlite
