#pragma once

#include <array>
#include <map>
#include <optional>
#include <queue>
#include <vector>

#include "gcrl/gridbuild/env.hpp"
#include "gcrl/taskman/managed_env.hpp"

namespace gcrl::oracle {

using gridbuild::BuildAction;
using gridbuild::Cell;

// Scripted builder for flying mode: breadth-first search to a free cell from
// which the goal cell can be targeted, then turn, pitch, select and act.
inline std::optional<std::vector<BuildAction>> plan_subtask(const gridbuild::GridBuildEnv& env,
                                                            const taskman::Subtask& subtask) {
  using namespace gridbuild;
  if (env.mode() != Mode::Flying) throw ConfigError("the scripted builder needs flying mode");
  const VoxelGrid& grid = env.grid();
  const Cell goal = taskman::BuildTracker::goal_cell(subtask);
  const auto* place = std::get_if<taskman::PlaceBlock>(&subtask);

  struct Stand {
    Yaw yaw;
    Pitch pitch;
  };
  std::map<Cell, Stand> stands;
  for (const Yaw yaw : {Yaw::North, Yaw::East, Yaw::South, Yaw::West}) {
    for (const Pitch pitch : {Pitch::Level, Pitch::Down, Pitch::Up}) {
      Cell c = goal - yaw_offset(yaw);
      if (pitch == Pitch::Down) c.y += 1;
      if (pitch == Pitch::Up) c.y -= 1;
      if (in_bounds(c) && !grid.occupied(c) && c != goal) stands.emplace(c, Stand{yaw, pitch});
    }
  }
  if (stands.empty()) return std::nullopt;

  static constexpr std::array<std::pair<Cell, BuildAction>, 6> kMoves = {
      std::pair{Cell{0, 0, -1}, BuildAction::MoveNorth}, std::pair{Cell{1, 0, 0}, BuildAction::MoveEast},
      std::pair{Cell{0, 0, 1}, BuildAction::MoveSouth},  std::pair{Cell{-1, 0, 0}, BuildAction::MoveWest},
      std::pair{Cell{0, 1, 0}, BuildAction::MoveUp},     std::pair{Cell{0, -1, 0}, BuildAction::MoveDown}};
  const Cell start = env.pose().cell;
  std::map<Cell, std::pair<Cell, BuildAction>> parent;
  std::queue<Cell> frontier;
  frontier.push(start);
  parent.emplace(start, std::pair{start, BuildAction::Noop});
  std::optional<Cell> reached;
  while (!frontier.empty()) {
    const Cell c = frontier.front();
    frontier.pop();
    if (stands.count(c)) {
      reached = c;
      break;
    }
    for (const auto& [d, a] : kMoves) {
      const Cell n = c + d;
      if (!in_bounds(n) || grid.occupied(n) || parent.count(n)) continue;
      parent.emplace(n, std::pair{c, a});
      frontier.push(n);
    }
  }
  if (!reached) return std::nullopt;

  std::vector<BuildAction> path;
  for (Cell c = *reached; c != start; c = parent.at(c).first) path.push_back(parent.at(c).second);
  std::vector<BuildAction> out(path.rbegin(), path.rend());

  const Stand s = stands.at(*reached);
  const int turns = (static_cast<int>(s.yaw) - static_cast<int>(env.pose().yaw) + 4) % 4;
  if (turns == 3) {
    out.push_back(BuildAction::TurnLeft);
  } else {
    for (int k = 0; k < turns; ++k) out.push_back(BuildAction::TurnRight);
  }
  for (int p = static_cast<int>(env.pose().pitch); p != static_cast<int>(s.pitch);) {
    if (p < static_cast<int>(s.pitch)) {
      out.push_back(BuildAction::LookUp);
      ++p;
    } else {
      out.push_back(BuildAction::LookDown);
      --p;
    }
  }
  if (place) {
    if (env.selected() != place->block.color) {
      out.push_back(static_cast<BuildAction>(static_cast<int>(BuildAction::SelectBlue) + color_id(place->block.color) - 1));
    }
    out.push_back(BuildAction::Place);
  } else {
    out.push_back(BuildAction::Break);
  }
  return out;
}

struct OracleResult {
  bool success = false;
  std::size_t completed = 0;
  double reward = 0.0;
  int steps = 0;
  std::vector<BuildAction> actions;
};

// Drives a reset managed environment until the episode ends, replanning for
// every active subtask.
inline OracleResult run_oracle(taskman::BuildManagedEnv& env) {
  OracleResult r;
  while (!env.done()) {
    const auto& cursor = env.tracker().cursor();
    const auto plan = plan_subtask(env.env(), cursor.active());
    if (!plan) break;
    const std::size_t before = cursor.index();
    for (const BuildAction a : *plan) {
      const taskman::ManagedStep st = env.step(a);
      r.actions.push_back(a);
      r.reward += st.reward;
      ++r.steps;
      r.success = st.success;
      r.completed = st.completed;
      if (st.done || st.completed != before) break;
    }
    if (!env.done() && env.tracker().cursor().index() == before) break;
  }
  return r;
}

}  // namespace gcrl::oracle
