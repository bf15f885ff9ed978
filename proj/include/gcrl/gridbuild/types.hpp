#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"

namespace gcrl::gridbuild {

// Canonical frame: x east, y up, z south.
inline constexpr int kSizeX = 11;
inline constexpr int kSizeY = 9;
inline constexpr int kSizeZ = 11;
inline constexpr int kNumCells = kSizeX * kSizeY * kSizeZ;
inline constexpr int kNumColors = 6;

enum class BlockColor : std::uint8_t { Blue = 1, Green = 2, Red = 3, Orange = 4, Purple = 5, Yellow = 6 };

inline constexpr std::array<std::string_view, kNumColors> kColorNames = {"blue",   "green",  "red",
                                                                         "orange", "purple", "yellow"};

inline bool valid_color_id(int id) { return id >= 1 && id <= kNumColors; }

inline BlockColor color_from_id(int id) {
  if (!valid_color_id(id)) throw ConfigError("invalid block color id " + std::to_string(id));
  return static_cast<BlockColor>(id);
}

inline int color_id(BlockColor c) { return static_cast<int>(c); }

inline std::string_view color_name(BlockColor c) { return kColorNames[color_id(c) - 1]; }

inline std::optional<BlockColor> color_from_name(std::string_view name) {
  for (int i = 0; i < kNumColors; ++i) {
    if (kColorNames[i] == name) return static_cast<BlockColor>(i + 1);
  }
  return std::nullopt;
}

struct Cell {
  int x = 0;
  int y = 0;
  int z = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
  friend Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

struct Bounds {
  int x = kSizeX;
  int y = kSizeY;
  int z = kSizeZ;

  bool contains(Cell c) const { return c.x >= 0 && c.x < x && c.y >= 0 && c.y < y && c.z >= 0 && c.z < z; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

inline bool in_bounds(Cell c) { return Bounds{}.contains(c); }

inline int chebyshev(Cell a, Cell b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

struct BlockSpec {
  Cell cell;
  BlockColor color = BlockColor::Blue;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

inline std::string to_string(Cell c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ", " + std::to_string(c.z) + ")";
}

// Dense 11x9x11 voxel volume; 0 marks an empty cell, otherwise the color id.
class VoxelGrid {
 public:
  static int index(Cell c) { return (c.y * kSizeZ + c.z) * kSizeX + c.x; }

  std::uint8_t at(Cell c) const { return cells_[static_cast<std::size_t>(index(c))]; }
  bool occupied(Cell c) const { return in_bounds(c) && at(c) != 0; }

  void set(Cell c, BlockColor color) { cells_[static_cast<std::size_t>(index(c))] = static_cast<std::uint8_t>(color); }
  void clear(Cell c) { cells_[static_cast<std::size_t>(index(c))] = 0; }
  void clear_all() { cells_.fill(0); }

  int occupied_count() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(), [](std::uint8_t v) { return v != 0; }));
  }

  int count_color(BlockColor color) const {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), static_cast<std::uint8_t>(color)));
  }

  // Occupied cells in (x, z, y) order.
  std::vector<BlockSpec> blocks() const {
    std::vector<BlockSpec> out;
    for (int x = 0; x < kSizeX; ++x)
      for (int z = 0; z < kSizeZ; ++z)
        for (int y = 0; y < kSizeY; ++y) {
          const Cell c{x, y, z};
          if (at(c) != 0) out.push_back({c, static_cast<BlockColor>(at(c))});
        }
    return out;
  }

  const std::array<std::uint8_t, kNumCells>& raw() const { return cells_; }

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  std::array<std::uint8_t, kNumCells> cells_{};
};

enum class Yaw : std::uint8_t { North = 0, East = 1, South = 2, West = 3 };
enum class Pitch : std::uint8_t { Down = 0, Level = 1, Up = 2 };

inline Cell yaw_offset(Yaw yaw) {
  switch (yaw) {
    case Yaw::North: return {0, 0, -1};
    case Yaw::East: return {1, 0, 0};
    case Yaw::South: return {0, 0, 1};
    case Yaw::West: return {-1, 0, 0};
  }
  return {};
}

struct AgentPose {
  Cell cell;
  Yaw yaw = Yaw::North;
  Pitch pitch = Pitch::Level;

  friend bool operator==(const AgentPose&, const AgentPose&) = default;
};

// Cell the agent acts on: the neighbour in the facing direction, shifted one
// cell down or up by the pitch.
inline Cell target_cell(const AgentPose& pose) {
  Cell t = pose.cell + yaw_offset(pose.yaw);
  if (pose.pitch == Pitch::Down) t.y -= 1;
  if (pose.pitch == Pitch::Up) t.y += 1;
  return t;
}

enum class Mode : std::uint8_t { Flying, Walking };

inline std::string_view mode_name(Mode m) { return m == Mode::Flying ? "flying" : "walking"; }

inline Mode mode_from_name(std::string_view s) {
  if (s == "flying") return Mode::Flying;
  if (s == "walking") return Mode::Walking;
  throw ConfigError("unknown build mode '" + std::string(s) + "'");
}

// The first 13 actions are the discrete IGLU action set; the rest replace the
// continuous movement subspace with cell steps.
enum class BuildAction : std::uint8_t {
  Noop,
  TurnLeft,
  TurnRight,
  LookUp,
  LookDown,
  Break,
  Place,
  SelectBlue,
  SelectGreen,
  SelectRed,
  SelectOrange,
  SelectPurple,
  SelectYellow,
  MoveNorth,
  MoveEast,
  MoveSouth,
  MoveWest,
  MoveUp,
  MoveDown,
};

inline constexpr int kNumDiscreteCoreActions = 13;
inline constexpr int kNumActions = 19;

inline constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "noop",         "turn_left",    "turn_right",    "look_up",    "look_down",  "break",     "place",
    "select_blue",  "select_green", "select_red",    "select_orange", "select_purple", "select_yellow",
    "move_north",   "move_east",    "move_south",    "move_west",  "move_up",    "move_down"};

inline std::string_view action_name(BuildAction a) { return kActionNames[static_cast<std::size_t>(a)]; }

inline std::optional<BuildAction> action_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<BuildAction>(i);
  }
  return std::nullopt;
}

inline BuildAction select_action(BlockColor c) {
  return static_cast<BuildAction>(static_cast<int>(BuildAction::SelectBlue) + color_id(c) - 1);
}

}  // namespace gcrl::gridbuild
