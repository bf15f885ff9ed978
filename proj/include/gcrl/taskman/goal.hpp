#pragma once

#include <vector>

#include "gcrl/taskman/subtask.hpp"

namespace gcrl::taskman {

using GoalVector = std::vector<double>;

// [place, remove] one-hot, cell scaled to [0, 1], color one-hot (zeros for removals).
inline constexpr int kBuildGoalDim = 2 + 3 + gridbuild::kNumColors;
// Achievement one-hot plus count / kCountScale.
inline constexpr int kTechGoalDim = techlite::kNumAchievements + 1;
inline constexpr double kCountScale = 10.0;

inline void encode_goal_into(const Subtask& subtask, std::vector<double>& out) {
  using namespace gridbuild;
  if (const auto* a = std::get_if<Achieve>(&subtask)) {
    for (int i = 0; i < techlite::kNumAchievements; ++i) {
      out.push_back(i == techlite::achievement_index(a->achievement) ? 1.0 : 0.0);
    }
    out.push_back(a->count / kCountScale);
    return;
  }
  const bool place = std::holds_alternative<PlaceBlock>(subtask);
  const Cell cell = place ? std::get<PlaceBlock>(subtask).block.cell : std::get<RemoveBlock>(subtask).cell;
  out.push_back(place ? 1.0 : 0.0);
  out.push_back(place ? 0.0 : 1.0);
  out.push_back(cell.x / double(kSizeX - 1));
  out.push_back(cell.y / double(kSizeY - 1));
  out.push_back(cell.z / double(kSizeZ - 1));
  const int color = place ? color_id(std::get<PlaceBlock>(subtask).block.color) : 0;
  for (int c = 1; c <= kNumColors; ++c) out.push_back(c == color ? 1.0 : 0.0);
}

inline GoalVector encode_goal(const Subtask& subtask) {
  GoalVector g;
  encode_goal_into(subtask, g);
  return g;
}

}  // namespace gcrl::taskman
