#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/techlite/types.hpp"

namespace gcrl::taskman {

struct PlaceBlock {
  gridbuild::BlockSpec block;
  friend bool operator==(const PlaceBlock&, const PlaceBlock&) = default;
};

struct RemoveBlock {
  gridbuild::Cell cell;
  friend bool operator==(const RemoveBlock&, const RemoveBlock&) = default;
};

struct Achieve {
  techlite::Achievement achievement = techlite::Achievement::CollectWood;
  int count = 1;
  friend bool operator==(const Achieve&, const Achieve&) = default;
};

using Subtask = std::variant<PlaceBlock, RemoveBlock, Achieve>;

struct TaskPlan {
  std::vector<Subtask> subtasks;
  std::string source_id;

  friend bool operator==(const TaskPlan&, const TaskPlan&) = default;
};

enum class EnvKind { GridBuild, TechLite };

inline bool is_block_subtask(const Subtask& s) { return !std::holds_alternative<Achieve>(s); }

inline std::string describe(const Subtask& s) {
  if (const auto* p = std::get_if<PlaceBlock>(&s)) {
    return "place " + std::string(gridbuild::color_name(p->block.color)) + " at " + gridbuild::to_string(p->block.cell);
  }
  if (const auto* r = std::get_if<RemoveBlock>(&s)) return "remove at " + gridbuild::to_string(r->cell);
  const auto& a = std::get<Achieve>(s);
  return std::string(techlite::achievement_name(a.achievement)) + (a.count > 1 ? " x" + std::to_string(a.count) : "");
}

// Rejects empty plans, subtasks of the wrong environment kind, out-of-bounds
// cells and non-positive counts.
inline void validate_plan(const TaskPlan& plan, EnvKind kind) {
  if (plan.subtasks.empty()) throw ConfigError("task plan is empty");
  for (std::size_t i = 0; i < plan.subtasks.size(); ++i) {
    const Subtask& s = plan.subtasks[i];
    const std::string where = "subtask " + std::to_string(i);
    if (kind == EnvKind::GridBuild && !is_block_subtask(s))
      throw ConfigError(where + ": achievement subtask on a gridbuild environment");
    if (kind == EnvKind::TechLite && is_block_subtask(s))
      throw ConfigError(where + ": block subtask on a techlite environment");
    if (const auto* p = std::get_if<PlaceBlock>(&s); p && !gridbuild::in_bounds(p->block.cell))
      throw ConfigError(where + ": cell out of bounds");
    if (const auto* r = std::get_if<RemoveBlock>(&s); r && !gridbuild::in_bounds(r->cell))
      throw ConfigError(where + ": cell out of bounds");
    if (const auto* a = std::get_if<Achieve>(&s); a && a->count < 1) throw ConfigError(where + ": count must be >= 1");
  }
}

// Structure left behind after executing every block subtask in order on an
// empty volume.
inline std::vector<gridbuild::BlockSpec> final_figure(const TaskPlan& plan,
                                                      std::vector<gridbuild::BlockSpec> start = {}) {
  gridbuild::VoxelGrid grid;
  for (const auto& b : start) grid.set(b.cell, b.color);
  for (const Subtask& s : plan.subtasks) {
    if (const auto* p = std::get_if<PlaceBlock>(&s)) grid.set(p->block.cell, p->block.color);
    if (const auto* r = std::get_if<RemoveBlock>(&s)) grid.clear(r->cell);
  }
  return grid.blocks();
}

}  // namespace gcrl::taskman
