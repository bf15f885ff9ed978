#pragma once

#include <string>
#include <vector>

#include "gcrl/policy/trainer.hpp"
#include "gcrl/taskman/managed_env.hpp"

namespace gcrl::policy {

using taskman::BuildManagedEnv;
using taskman::TechManagedEnv;

inline constexpr int kAdjacentBudget = 20;

// Place one block on a marked floor cell next to the agent, in the color the
// agent starts with (or a random one). The agent spawns level on the empty
// floor facing a random direction, so the task needs at most two turns, a
// placement and, with random colors, one selection.
inline TaskSpec<BuildManagedEnv> adjacent_place_task(bool random_color = false,
                                                     gridbuild::Mode mode = gridbuild::Mode::Flying) {
  return {"place_adjacent", [random_color, mode](BuildManagedEnv& env, Rng& rng) {
            using namespace gridbuild;
            const BuildTask task{{}, mode, rng()};
            GridBuildEnv probe;
            const Cell agent = probe.reset(task).pose.cell;
            std::vector<Cell> options;
            for (const Yaw y : {Yaw::North, Yaw::East, Yaw::South, Yaw::West}) {
              const Cell c = agent + yaw_offset(y);
              if (in_bounds(c)) options.push_back(c);
            }
            const Cell goal = options[rng.below(options.size())];
            const BlockColor color =
                random_color ? static_cast<BlockColor>(1 + rng.below(kNumColors)) : probe.selected();
            env.attach({{taskman::PlaceBlock{{goal, color}}}, "place_adjacent"});
            env.reset(task);
          }};
}

// One task per (plan, subtask index): earlier blocks are pre-built and only
// the indexed subtask is issued.
inline std::vector<TaskSpec<BuildManagedEnv>> build_focus_tasks(const std::vector<taskman::TaskPlan>& plans,
                                                                 gridbuild::Mode mode = gridbuild::Mode::Flying) {
  std::vector<TaskSpec<BuildManagedEnv>> out;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (std::size_t k = 0; k < plans[p].subtasks.size(); ++k) {
      const std::string id = plans[p].source_id.empty() ? std::to_string(p) : plans[p].source_id;
      out.push_back({id + "#" + std::to_string(k), [plan = plans[p], k, mode](BuildManagedEnv& env, Rng& rng) {
                       env.attach(plan);
                       env.reset(gridbuild::BuildTask{{}, mode, rng()}, k);
                     }});
    }
  }
  return out;
}

// Single-achievement task on a fresh world per episode.
inline TaskSpec<TechManagedEnv> achievement_task(techlite::Achievement a, int count = 1) {
  return {std::string(techlite::achievement_name(a)), [a, count](TechManagedEnv& env, Rng& rng) {
            env.attach({{taskman::Achieve{a, count}}, std::string(techlite::achievement_name(a))});
            env.reset(rng());
          }};
}

inline std::vector<TaskSpec<TechManagedEnv>> all_achievement_tasks() {
  std::vector<TaskSpec<TechManagedEnv>> out;
  for (int i = 0; i < techlite::kNumAchievements; ++i) out.push_back(achievement_task(static_cast<techlite::Achievement>(i)));
  return out;
}

inline const std::vector<std::string>& iron_tier_names() {
  static const std::vector<std::string> names = {"collect_iron", "make_iron_pickaxe", "make_iron_sword",
                                                 "collect_diamond"};
  return names;
}

}  // namespace gcrl::policy
