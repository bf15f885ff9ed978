#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"
#include "gcrl/gridbuild/types.hpp"

namespace gcrl::gridbuild {

struct BuildTask {
  std::vector<BlockSpec> initial_blocks;
  Mode mode = Mode::Walking;
  std::uint64_t seed = 0;
};

struct EnvConfig {
  int inventory_capacity = 20;
};

struct BuildObservation {
  VoxelGrid grid;
  std::array<int, kNumColors> inventory{};
  AgentPose pose;
  BlockColor selected = BlockColor::Blue;

  friend bool operator==(const BuildObservation&, const BuildObservation&) = default;
};

struct BuildEvent {
  enum class Kind : std::uint8_t { Placed, Removed };
  Kind kind = Kind::Placed;
  // For removals the color is the one the cell held before the break.
  BlockSpec block;

  friend bool operator==(const BuildEvent&, const BuildEvent&) = default;
};

struct BuildStep {
  BuildObservation obs;
  std::vector<BuildEvent> events;
};

inline bool supported(const VoxelGrid& grid, Cell c) {
  if (c.y == 0) return true;
  static constexpr std::array<Cell, 6> kNeighbours = {
      Cell{1, 0, 0}, Cell{-1, 0, 0}, Cell{0, 1, 0}, Cell{0, -1, 0}, Cell{0, 0, 1}, Cell{0, 0, -1}};
  for (const Cell& d : kNeighbours) {
    if (grid.occupied(c + d)) return true;
  }
  return false;
}

// Validates a task's initial blocks: all in bounds, one block per cell, and
// per-color counts within the inventory capacity.
inline void validate_task(const BuildTask& task, const EnvConfig& cfg = {}) {
  std::set<Cell> seen;
  std::array<int, kNumColors> per_color{};
  for (const BlockSpec& b : task.initial_blocks) {
    if (!in_bounds(b.cell)) throw ConfigError("initial block out of bounds at " + to_string(b.cell));
    if (!valid_color_id(color_id(b.color))) throw ConfigError("initial block has invalid color");
    if (!seen.insert(b.cell).second) throw ConfigError("duplicate initial block at " + to_string(b.cell));
    if (++per_color[color_id(b.color) - 1] > cfg.inventory_capacity)
      throw ConfigError("initial blocks exceed inventory capacity for color " + std::string(color_name(b.color)));
  }
}

// IGLU-style voxel building environment over the canonical 11x9x11 volume.
// Illegal actions are no-ops; the environment never terminates on its own.
class GridBuildEnv {
 public:
  explicit GridBuildEnv(EnvConfig cfg = {}) : cfg_(cfg) {}

  const EnvConfig& config() const { return cfg_; }

  BuildObservation reset(const BuildTask& task) {
    validate_task(task, cfg_);
    mode_ = task.mode;
    grid_.clear_all();
    for (const BlockSpec& b : task.initial_blocks) grid_.set(b.cell, b.color);
    for (int c = 0; c < kNumColors; ++c) {
      inventory_[static_cast<std::size_t>(c)] = cfg_.inventory_capacity - grid_.count_color(static_cast<BlockColor>(c + 1));
    }
    selected_ = BlockColor::Blue;
    spawn(task.seed);
    active_ = true;
    return observe();
  }

  BuildStep step(BuildAction action) {
    if (!active_) throw std::logic_error("GridBuildEnv::step called before reset");
    BuildStep out;
    switch (action) {
      case BuildAction::Noop: break;
      case BuildAction::TurnLeft: pose_.yaw = static_cast<Yaw>((static_cast<int>(pose_.yaw) + 3) % 4); break;
      case BuildAction::TurnRight: pose_.yaw = static_cast<Yaw>((static_cast<int>(pose_.yaw) + 1) % 4); break;
      case BuildAction::LookUp:
        if (pose_.pitch != Pitch::Up) pose_.pitch = static_cast<Pitch>(static_cast<int>(pose_.pitch) + 1);
        break;
      case BuildAction::LookDown:
        if (pose_.pitch != Pitch::Down) pose_.pitch = static_cast<Pitch>(static_cast<int>(pose_.pitch) - 1);
        break;
      case BuildAction::Break: try_break(out.events); break;
      case BuildAction::Place: try_place(out.events); break;
      case BuildAction::SelectBlue:
      case BuildAction::SelectGreen:
      case BuildAction::SelectRed:
      case BuildAction::SelectOrange:
      case BuildAction::SelectPurple:
      case BuildAction::SelectYellow:
        selected_ = static_cast<BlockColor>(static_cast<int>(action) - static_cast<int>(BuildAction::SelectBlue) + 1);
        break;
      case BuildAction::MoveNorth: move({0, 0, -1}); break;
      case BuildAction::MoveEast: move({1, 0, 0}); break;
      case BuildAction::MoveSouth: move({0, 0, 1}); break;
      case BuildAction::MoveWest: move({-1, 0, 0}); break;
      case BuildAction::MoveUp:
        if (mode_ == Mode::Flying) move({0, 1, 0});
        break;
      case BuildAction::MoveDown:
        if (mode_ == Mode::Flying) move({0, -1, 0});
        break;
    }
    out.obs = observe();
    return out;
  }

  BuildObservation observe() const { return BuildObservation{grid_, inventory_, pose_, selected_}; }

  const VoxelGrid& grid() const { return grid_; }
  const AgentPose& pose() const { return pose_; }
  Mode mode() const { return mode_; }
  BlockColor selected() const { return selected_; }
  const std::array<int, kNumColors>& inventory() const { return inventory_; }

 private:
  void spawn(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x5157));
    std::vector<Cell> candidates;
    for (int x = 0; x < kSizeX; ++x) {
      for (int z = 0; z < kSizeZ; ++z) {
        int top = 0;
        for (int y = 0; y < kSizeY; ++y) {
          if (grid_.at({x, y, z}) != 0) top = y + 1;
        }
        if (top < kSizeY) candidates.push_back({x, top, z});
      }
    }
    if (candidates.empty()) throw ConfigError("no free cell to spawn the agent");
    pose_.cell = candidates[rng.below(candidates.size())];
    pose_.yaw = static_cast<Yaw>(rng.below(4));
    pose_.pitch = Pitch::Level;
  }

  void move(Cell delta) {
    Cell next = pose_.cell + delta;
    if (!in_bounds(next)) return;
    if (mode_ == Mode::Flying) {
      if (!grid_.occupied(next)) pose_.cell = next;
      return;
    }
    if (grid_.occupied(next)) {
      // Step up onto a one-block ledge.
      const Cell above = next + Cell{0, 1, 0};
      if (!in_bounds(above) || grid_.occupied(above)) return;
      next = above;
    }
    while (next.y > 0 && !grid_.occupied(next + Cell{0, -1, 0})) --next.y;
    pose_.cell = next;
  }

  void try_place(std::vector<BuildEvent>& events) {
    const Cell t = target_cell(pose_);
    if (!in_bounds(t) || grid_.occupied(t) || t == pose_.cell) return;
    if (!supported(grid_, t)) return;
    auto& count = inventory_[static_cast<std::size_t>(color_id(selected_) - 1)];
    if (count <= 0) return;
    --count;
    grid_.set(t, selected_);
    events.push_back({BuildEvent::Kind::Placed, {t, selected_}});
  }

  void try_break(std::vector<BuildEvent>& events) {
    const Cell t = target_cell(pose_);
    if (!grid_.occupied(t)) return;
    const auto color = static_cast<BlockColor>(grid_.at(t));
    grid_.clear(t);
    ++inventory_[static_cast<std::size_t>(color_id(color) - 1)];
    events.push_back({BuildEvent::Kind::Removed, {t, color}});
    if (mode_ == Mode::Walking) {
      while (pose_.cell.y > 0 && !grid_.occupied(pose_.cell + Cell{0, -1, 0})) --pose_.cell.y;
    }
  }

  EnvConfig cfg_;
  VoxelGrid grid_;
  std::array<int, kNumColors> inventory_{};
  AgentPose pose_;
  BlockColor selected_ = BlockColor::Blue;
  Mode mode_ = Mode::Walking;
  bool active_ = false;
};

// Symbolic observation features: pose, selection, inventory, a 3x3x3 window
// of occupancy around the agent, and the state of the targeted cell.
inline constexpr int kObservationFeatures = 4 + 3 + 3 + kNumColors + kNumColors + 27 * 2 + 3;

inline void observation_features(const BuildObservation& obs, int inventory_capacity, std::vector<double>& out) {
  const AgentPose& p = obs.pose;
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<int>(p.yaw) == i ? 1.0 : 0.0);
  for (int i = 0; i < 3; ++i) out.push_back(static_cast<int>(p.pitch) == i ? 1.0 : 0.0);
  out.push_back(p.cell.x / double(kSizeX - 1));
  out.push_back(p.cell.y / double(kSizeY - 1));
  out.push_back(p.cell.z / double(kSizeZ - 1));
  for (int c = 1; c <= kNumColors; ++c) out.push_back(color_id(obs.selected) == c ? 1.0 : 0.0);
  for (int c = 0; c < kNumColors; ++c) {
    out.push_back(obs.inventory[static_cast<std::size_t>(c)] / double(std::max(1, inventory_capacity)));
  }
  for (int dy = -1; dy <= 1; ++dy)
    for (int dz = -1; dz <= 1; ++dz)
      for (int dx = -1; dx <= 1; ++dx) {
        const Cell c = p.cell + Cell{dx, dy, dz};
        const bool inside = in_bounds(c);
        out.push_back(inside && obs.grid.at(c) != 0 ? 1.0 : 0.0);
        out.push_back(inside ? 0.0 : 1.0);
      }
  const Cell t = target_cell(p);
  const bool inside = in_bounds(t);
  out.push_back(inside ? 1.0 : 0.0);
  out.push_back(inside && obs.grid.at(t) != 0 ? 1.0 : 0.0);
  out.push_back(inside && supported(obs.grid, t) ? 1.0 : 0.0);
}

inline nlohmann::json task_to_json(const BuildTask& task) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const BlockSpec& b : task.initial_blocks) {
    blocks.push_back({b.cell.x, b.cell.y, b.cell.z, color_id(b.color)});
  }
  return {{"blocks", blocks}, {"mode", std::string(mode_name(task.mode))}, {"seed", task.seed}};
}

inline BuildTask task_from_json(const nlohmann::json& j) {
  BuildTask task;
  try {
    for (const auto& row : j.at("blocks")) {
      if (!row.is_array() || row.size() != 4) throw ConfigError("block entries must be [x, y, z, color]");
      task.initial_blocks.push_back(
          {{row[0].get<int>(), row[1].get<int>(), row[2].get<int>()}, color_from_id(row[3].get<int>())});
    }
    task.mode = mode_from_name(j.value("mode", std::string("walking")));
    task.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed build task: ") + e.what());
  }
  validate_task(task);
  return task;
}

}  // namespace gcrl::gridbuild
