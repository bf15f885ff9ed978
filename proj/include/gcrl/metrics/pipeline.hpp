#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcrl/core/rng.hpp"
#include "gcrl/lang/classify.hpp"
#include "gcrl/metrics/metrics.hpp"
#include "gcrl/oracle/builder.hpp"
#include "gcrl/policy/ppo.hpp"
#include "gcrl/taskman/managed_env.hpp"

namespace gcrl::metrics {

// Full-instruction episodes: the Task Manager issues every subtask of the
// plan in order, one at a time.

struct BuildEpisode {
  std::string id;
  taskman::TaskPlan plan;
  std::vector<BlockSpec> built;
  std::vector<BlockSpec> target;
  F1Report f1;
  lang::FigureClass classes;
  std::vector<bool> completed;
  double bonus = 0.0;
  double reward = 0.0;
  int steps = 0;
  std::vector<int> actions;
};

struct TechEpisode {
  std::string id;
  taskman::TaskPlan plan;
  std::vector<bool> completed;
  double reward = 0.0;
  int steps = 0;
  std::vector<int> actions;
};

inline std::vector<bool> completion_mask(std::size_t total, std::size_t done) {
  std::vector<bool> m(total, false);
  for (std::size_t i = 0; i < std::min(done, total); ++i) m[i] = true;
  return m;
}

inline F1Report score_figure(const std::vector<BlockSpec>& built, const std::vector<BlockSpec>& target,
                             const F1Config& cfg) {
  // A plan can legitimately clear the volume; the empty target then counts as
  // matched only by an empty build.
  if (target.empty()) {
    F1Report r;
    r.precision = r.recall = r.f1 = built.empty() ? 1.0 : 0.0;
    return r;
  }
  return f1_score(built, target, cfg);
}

inline BuildEpisode finish_build_episode(const taskman::BuildManagedEnv& env, const taskman::TaskPlan& plan,
                                         const F1Config& f1cfg) {
  BuildEpisode e;
  e.id = plan.source_id;
  e.plan = plan;
  e.built = env.env().grid().blocks();
  e.target = taskman::final_figure(plan);
  e.f1 = score_figure(e.built, e.target, f1cfg);
  e.classes = lang::classify_figure(e.target);
  e.bonus = env.tracker().cursor().bonus_total();
  e.completed = completion_mask(plan.subtasks.size(), env.tracker().cursor().index());
  return e;
}

// Scripted oracle on a fresh flying-mode volume.
inline BuildEpisode run_build_oracle(const taskman::TaskPlan& plan, std::uint64_t seed,
                                     const taskman::RewardConfig& reward = {}, const F1Config& f1cfg = {}) {
  taskman::BuildManagedEnv env(reward);
  env.attach(plan);
  env.reset({{}, gridbuild::Mode::Flying, seed});
  const oracle::OracleResult r = oracle::run_oracle(env);
  BuildEpisode e = finish_build_episode(env, plan, f1cfg);
  e.reward = r.reward;
  e.steps = r.steps;
  for (auto a : r.actions) e.actions.push_back(static_cast<int>(a));
  return e;
}

inline BuildEpisode run_build_policy(const policy::Policy& pol, const taskman::TaskPlan& plan, std::uint64_t seed,
                                     gridbuild::Mode mode = gridbuild::Mode::Flying,
                                     const taskman::RewardConfig& reward = {}, const F1Config& f1cfg = {},
                                     bool greedy = false) {
  taskman::BuildManagedEnv env(reward);
  env.attach(plan);
  env.reset({{}, mode, seed});
  Rng rng(derive_seed(seed, 0xac7));
  BuildEpisode e;
  double total = 0.0;
  int steps = 0;
  std::vector<int> actions;
  while (!env.done()) {
    const int a = policy::act(pol, env.features(), rng, greedy).action;
    total += env.step(a).reward;
    actions.push_back(a);
    ++steps;
  }
  e = finish_build_episode(env, plan, f1cfg);
  e.reward = total;
  e.steps = steps;
  e.actions = std::move(actions);
  return e;
}

inline TechEpisode run_tech_policy(const policy::Policy& pol, const taskman::TaskPlan& plan, std::uint64_t seed,
                                   techlite::WorldSize world = {}, const taskman::RewardConfig& reward = {},
                                   bool greedy = false) {
  taskman::TechManagedEnv env(reward, world);
  env.attach(plan);
  env.reset(seed);
  Rng rng(derive_seed(seed, 0xac7));
  TechEpisode e;
  e.id = plan.source_id;
  e.plan = plan;
  while (!env.done()) {
    const int a = policy::act(pol, env.features(), rng, greedy).action;
    e.reward += env.step(a).reward;
    e.actions.push_back(a);
    ++e.steps;
  }
  e.completed = completion_mask(plan.subtasks.size(), env.tracker().cursor().index());
  return e;
}

inline std::vector<ClassResult> class_results(const std::vector<BuildEpisode>& eps) {
  std::vector<ClassResult> out;
  for (const auto& e : eps) out.push_back({e.classes, e.f1.f1});
  return out;
}

inline SuccessReport tech_success(const std::vector<TechEpisode>& eps) {
  std::vector<EpisodeRecord> recs;
  for (const auto& e : eps) recs.push_back({e.plan, e.completed});
  return success_report(recs);
}

inline nlohmann::json to_json(const BuildEpisode& e) {
  return {{"id", e.id},
          {"classes", lang::to_string(e.classes)},
          {"f1", to_json(e.f1)},
          {"subtasks", e.plan.subtasks.size()},
          {"completed", std::count(e.completed.begin(), e.completed.end(), true)},
          {"bonus", e.bonus},
          {"steps", e.steps}};
}

}  // namespace gcrl::metrics
