#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/env.hpp"
#include "gcrl/lang/codec.hpp"
#include "gcrl/taskman/subtask.hpp"

namespace gcrl::lang {

inline constexpr int kCenterX = 5;
inline constexpr int kCenterZ = 5;

inline bool xzy_less(const Cell& a, const Cell& b) { return std::tie(a.x, a.z, a.y) < std::tie(b.x, b.z, b.y); }

// Raised when recentering pushes blocks out of the volume. `clamped` holds the
// recentered blocks with coordinates clamped into bounds.
class NormalizeError : public Error {
 public:
  NormalizeError(const std::string& what, std::vector<BlockSpec> clamped)
      : Error(what), clamped_(std::move(clamped)) {}
  const std::vector<BlockSpec>& clamped() const { return clamped_; }

 private:
  std::vector<BlockSpec> clamped_;
};

inline Cell clamp_cell(Cell c) {
  return {std::clamp(c.x, 0, gridbuild::kSizeX - 1), std::clamp(c.y, 0, gridbuild::kSizeY - 1),
          std::clamp(c.z, 0, gridbuild::kSizeZ - 1)};
}

// Stable sort by (x, z, y), then translate horizontally so the first block
// sits at the horizontal center. Heights are unchanged.
inline std::vector<BlockSpec> normalize_blocks(std::vector<BlockSpec> blocks) {
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const BlockSpec& a, const BlockSpec& b) { return xzy_less(a.cell, b.cell); });
  if (blocks.empty()) return blocks;
  const Cell shift{kCenterX - blocks.front().cell.x, 0, kCenterZ - blocks.front().cell.z};
  int outside = 0;
  for (BlockSpec& b : blocks) {
    b.cell = b.cell + shift;
    if (!gridbuild::in_bounds(b.cell)) ++outside;
  }
  if (outside > 0) {
    std::vector<BlockSpec> clamped = blocks;
    for (BlockSpec& b : clamped) b.cell = clamp_cell(b.cell);
    throw NormalizeError(std::to_string(outside) + " block(s) leave the volume after recentering", std::move(clamped));
  }
  return blocks;
}

// One instruction step: a group of blocks placed (or removed) together.
struct PlanStep {
  bool remove = false;
  std::vector<CoordEntry> entries;
};

// Orders each step for execution and recenters the whole plan:
//  - placement steps follow (x, z, y) order, except that a block is deferred
//    until it has support (floor or an occupied neighbour) when some later
//    block in the step already does;
//  - removal steps go top-down;
//  - the first block of the first step is moved to the horizontal center.
// Returns the steps in execution order after the shift.
inline std::vector<PlanStep> normalize_steps(std::vector<PlanStep> steps) {
  gridbuild::VoxelGrid occupied;
  std::vector<PlanStep> out;
  for (PlanStep& step : steps) {
    out.push_back({step.remove, {}});
    std::vector<CoordEntry>& ordered = out.back().entries;
    if (step.remove) {
      std::stable_sort(step.entries.begin(), step.entries.end(), [](const CoordEntry& a, const CoordEntry& b) {
        return std::tie(b.cell.y, a.cell.x, a.cell.z) < std::tie(a.cell.y, b.cell.x, b.cell.z);
      });
      for (const CoordEntry& e : step.entries) {
        if (gridbuild::in_bounds(e.cell)) occupied.clear(e.cell);
        ordered.push_back({e.cell, 0});
      }
      continue;
    }
    std::vector<CoordEntry> pending = step.entries;
    std::stable_sort(pending.begin(), pending.end(),
                     [](const CoordEntry& a, const CoordEntry& b) { return xzy_less(a.cell, b.cell); });
    while (!pending.empty()) {
      auto it = std::find_if(pending.begin(), pending.end(), [&](const CoordEntry& e) {
        return !gridbuild::in_bounds(e.cell) || gridbuild::supported(occupied, e.cell);
      });
      if (it == pending.end()) it = pending.begin();
      if (gridbuild::in_bounds(it->cell)) occupied.set(it->cell, gridbuild::color_from_id(it->color_id));
      ordered.push_back(*it);
      pending.erase(it);
    }
  }
  const CoordEntry* first = nullptr;
  for (const PlanStep& st : out) {
    if (!st.entries.empty()) {
      first = &st.entries.front();
      break;
    }
  }
  if (!first) return out;
  const Cell shift{kCenterX - first->cell.x, 0, kCenterZ - first->cell.z};
  int outside = 0;
  std::vector<BlockSpec> clamped;
  for (PlanStep& st : out) {
    for (CoordEntry& e : st.entries) {
      e.cell = e.cell + shift;
      if (!gridbuild::in_bounds(e.cell)) ++outside;
      if (e.color_id != 0) clamped.push_back({clamp_cell(e.cell), gridbuild::color_from_id(e.color_id)});
    }
  }
  if (outside > 0) {
    throw NormalizeError(std::to_string(outside) + " block(s) leave the volume after recentering", std::move(clamped));
  }
  return out;
}

inline std::vector<CoordEntry> flatten(const std::vector<PlanStep>& steps) {
  std::vector<CoordEntry> out;
  for (const PlanStep& st : steps) out.insert(out.end(), st.entries.begin(), st.entries.end());
  return out;
}

inline taskman::TaskPlan normalize_plan(std::vector<PlanStep> steps, std::string source_id = {}) {
  taskman::TaskPlan plan;
  plan.source_id = std::move(source_id);
  plan.subtasks = to_subtasks(flatten(normalize_steps(std::move(steps))));
  return plan;
}

}  // namespace gcrl::lang
