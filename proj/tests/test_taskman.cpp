#include <gtest/gtest.h>

#include <set>

#include "gcrl/core/rng.hpp"
#include "gcrl/lang/corpus.hpp"
#include "gcrl/oracle/builder.hpp"
#include "gcrl/taskman/managed_env.hpp"
#include "tech_script.hpp"

using namespace gcrl;
using namespace gcrl::taskman;
using gridbuild::BlockColor;
using gridbuild::BlockSpec;
using gridbuild::BuildEvent;
using gridbuild::Cell;

namespace {

BuildEvent placed(Cell c, BlockColor col) { return {BuildEvent::Kind::Placed, {c, col}}; }
BuildEvent removed(Cell c, BlockColor col) { return {BuildEvent::Kind::Removed, {c, col}}; }

gridbuild::AgentPose pose_at(Cell c) { return {c, gridbuild::Yaw::North, gridbuild::Pitch::Level}; }

RewardConfig late() { return {}; }

RewardConfig early(bool shaping = false) {
  RewardConfig c;
  c.stage = Stage::Early;
  c.proximity_shaping = shaping;
  return c;
}

TaskPlan three_blocks() {
  return {{PlaceBlock{{{5, 0, 5}, BlockColor::Red}}, PlaceBlock{{{5, 1, 5}, BlockColor::Red}},
           PlaceBlock{{{5, 2, 5}, BlockColor::Red}}},
          "tower"};
}

}  // namespace

TEST(TaskManager, AttachValidatesPlan) {
  BuildManagedEnv env;
  EXPECT_THROW(env.attach({}), ConfigError);
  EXPECT_THROW(env.attach({{Achieve{techlite::Achievement::CollectWood, 1}}, ""}), ConfigError);
  EXPECT_THROW(env.attach({{PlaceBlock{{{11, 0, 0}, BlockColor::Red}}}, ""}), ConfigError);
  TechManagedEnv tech;
  EXPECT_THROW(tech.attach({{RemoveBlock{{1, 1, 1}}}, ""}), ConfigError);
  EXPECT_THROW(tech.attach({{Achieve{techlite::Achievement::CollectWood, 0}}, ""}), ConfigError);
  EXPECT_THROW(env.reset({}), ConfigError);
}

TEST(TaskManager, RewardConfigRejectsNonPositiveBonus) {
  RewardConfig c;
  c.subtask_bonus = 0.0;
  EXPECT_THROW(BuildManagedEnv{c}, ConfigError);
}

TEST(TaskManager, InitialGoalIsFirstSubtask) {
  BuildManagedEnv env;
  env.attach(three_blocks());
  env.reset({{}, gridbuild::Mode::Flying, 1});
  EXPECT_EQ(env.goal(), encode_goal(three_blocks().subtasks[0]));
  EXPECT_EQ(env.tracker().cursor().index(), 0u);
  EXPECT_EQ(static_cast<int>(env.features().size()), BuildManagedEnv::kFeatureDim);
}

TEST(TaskManager, TrainingFocusPrebuildsPrecedingBlocks) {
  BuildManagedEnv env;
  env.attach(three_blocks());
  env.reset({{}, gridbuild::Mode::Flying, 1}, 2);
  const auto blocks = env.env().grid().blocks();
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0], (BlockSpec{{5, 0, 5}, BlockColor::Red}));
  EXPECT_EQ(blocks[1], (BlockSpec{{5, 1, 5}, BlockColor::Red}));
  EXPECT_EQ(env.goal(), encode_goal(three_blocks().subtasks[2]));
  EXPECT_EQ(env.tracker().cursor().size(), 1u);
  EXPECT_THROW(env.reset({{}, gridbuild::Mode::Flying, 1}, 3), ConfigError);
}

TEST(TaskManager, LateStageCorrectPlacementPaysBonusAndAdvances) {
  BuildTracker t(three_blocks().subtasks, late());
  t.reset(pose_at({0, 0, 0}));
  const BuildEvent ev[] = {placed({5, 0, 5}, BlockColor::Red)};
  const auto out = t.on_step(ev, pose_at({0, 0, 0}));
  EXPECT_DOUBLE_EQ(out.reward, 1.0);
  EXPECT_EQ(out.transition, Transition::Advance);
  EXPECT_EQ(t.cursor().index(), 1u);
}

TEST(TaskManager, LateStageWrongPlacementIsPenalized) {
  BuildTracker t(three_blocks().subtasks, late());
  t.reset(pose_at({0, 0, 0}));
  const BuildEvent wrong_cell[] = {placed({4, 0, 5}, BlockColor::Red)};
  auto out = t.on_step(wrong_cell, pose_at({0, 0, 0}));
  EXPECT_DOUBLE_EQ(out.reward, -0.5);
  EXPECT_EQ(out.transition, Transition::Continue);
  const BuildEvent wrong_color[] = {placed({5, 0, 5}, BlockColor::Blue)};
  out = t.on_step(wrong_color, pose_at({0, 0, 0}));
  EXPECT_DOUBLE_EQ(out.reward, -0.5);
  const BuildEvent removal[] = {removed({1, 0, 1}, BlockColor::Blue)};
  EXPECT_DOUBLE_EQ(t.on_step(removal, pose_at({0, 0, 0})).reward, -0.5);
  EXPECT_EQ(t.cursor().index(), 0u);
}

TEST(TaskManager, EarlyStageDistanceReward) {
  BuildTracker t(three_blocks().subtasks, early());
  t.reset(pose_at({0, 0, 0}));
  const BuildEvent d1[] = {placed({6, 0, 4}, BlockColor::Red)};
  auto out = t.on_step(d1, pose_at({0, 0, 0}));
  EXPECT_DOUBLE_EQ(out.reward, 0.5);
  EXPECT_EQ(out.transition, Transition::Continue);
  const BuildEvent d3[] = {placed({8, 0, 5}, BlockColor::Green)};
  EXPECT_DOUBLE_EQ(t.on_step(d3, pose_at({0, 0, 0})).reward, 0.25);
}

TEST(TaskManager, ProximityShapingPaysOnlyForNewMinimum) {
  BuildTracker t(three_blocks().subtasks, early(true));
  t.reset(pose_at({0, 0, 5}));
  EXPECT_DOUBLE_EQ(t.on_step({}, pose_at({1, 0, 5})).reward, 0.02);
  EXPECT_DOUBLE_EQ(t.on_step({}, pose_at({0, 0, 5})).reward, 0.0);
  EXPECT_DOUBLE_EQ(t.on_step({}, pose_at({1, 0, 5})).reward, 0.0);
  EXPECT_DOUBLE_EQ(t.on_step({}, pose_at({2, 0, 5})).reward, 0.02);
  BuildTracker off(three_blocks().subtasks, late());
  off.reset(pose_at({0, 0, 5}));
  EXPECT_DOUBLE_EQ(off.on_step({}, pose_at({1, 0, 5})).reward, 0.0);
}

TEST(TaskManager, LastSubtaskEndsEpisode) {
  BuildTracker t({RemoveBlock{{2, 0, 2}}}, late());
  t.reset(pose_at({0, 0, 0}));
  const BuildEvent ev[] = {removed({2, 0, 2}, BlockColor::Orange)};
  const auto out = t.on_step(ev, pose_at({0, 0, 0}));
  EXPECT_EQ(out.transition, Transition::Done);
  EXPECT_DOUBLE_EQ(out.reward, 1.0);
  EXPECT_TRUE(t.cursor().finished());
}

TEST(TaskManager, PlanOrderIsStrict) {
  BuildTracker t(three_blocks().subtasks, late());
  t.reset(pose_at({0, 0, 0}));
  // Second subtask's block first: not credited.
  const BuildEvent second[] = {placed({5, 1, 5}, BlockColor::Red)};
  EXPECT_DOUBLE_EQ(t.on_step(second, pose_at({0, 0, 0})).reward, -0.5);
  EXPECT_EQ(t.cursor().index(), 0u);
}

TEST(TaskManager, BudgetExhaustionEndsEpisode) {
  RewardConfig c;
  c.step_budget = 5;
  BuildManagedEnv env(c);
  env.attach(three_blocks());
  env.reset({{}, gridbuild::Mode::Flying, 1});
  for (int k = 0; k < 4; ++k) EXPECT_FALSE(env.step(gridbuild::BuildAction::Noop).done);
  const auto s = env.step(gridbuild::BuildAction::Noop);
  EXPECT_TRUE(s.done);
  EXPECT_FALSE(s.success);
  EXPECT_THROW(env.step(gridbuild::BuildAction::Noop), std::logic_error);
}

TEST(TaskManager, GoalEncodingExample) {
  const GoalVector g = encode_goal(PlaceBlock{{{5, 0, 5}, BlockColor::Red}});
  const GoalVector expected = {1, 0, 0.5, 0.0, 0.5, 0, 0, 1, 0, 0, 0};
  ASSERT_EQ(g.size(), expected.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_DOUBLE_EQ(g[i], expected[i]) << i;
  const GoalVector a = encode_goal(Achieve{techlite::Achievement::CollectWood, 1});
  ASSERT_EQ(static_cast<int>(a.size()), kTechGoalDim);
  EXPECT_EQ(a[0], 1.0);
  EXPECT_DOUBLE_EQ(a.back(), 0.1);
}

TEST(TaskManager, GoalEncodingIsInjective) {
  std::set<GoalVector> seen;
  int n = 0;
  for (int x = 0; x < gridbuild::kSizeX; ++x)
    for (int y = 0; y < gridbuild::kSizeY; ++y)
      for (int z = 0; z < gridbuild::kSizeZ; ++z) {
        seen.insert(encode_goal(RemoveBlock{{x, y, z}}));
        ++n;
        for (int c = 1; c <= gridbuild::kNumColors; ++c) {
          seen.insert(encode_goal(PlaceBlock{{{x, y, z}, gridbuild::color_from_id(c)}}));
          ++n;
        }
      }
  for (int a = 0; a < techlite::kNumAchievements; ++a)
    for (int k = 1; k <= 9; ++k) {
      seen.insert(encode_goal(Achieve{static_cast<techlite::Achievement>(a), k}));
      ++n;
    }
  EXPECT_EQ(static_cast<int>(seen.size()), n);
}

TEST(TaskManager, TechTrackerCountsAndScalesEnvReward) {
  using techlite::Achievement;
  using techlite::Resource;
  using techlite::TechEvent;
  TechTracker t({Achieve{Achievement::CollectWood, 2}, Achieve{Achievement::PlaceTable, 1}}, {});
  t.reset();
  const TechEvent wood[] = {TechEvent::collected(Resource::Wood), TechEvent::unlocked(Achievement::CollectWood)};
  auto out = t.on_step(wood, 1.0);
  EXPECT_DOUBLE_EQ(out.reward, 0.1);
  EXPECT_EQ(out.transition, Transition::Continue);
  EXPECT_EQ(t.progress(), 1);
  out = t.on_step(wood, 0.0);
  EXPECT_DOUBLE_EQ(out.reward, 1.0);
  EXPECT_EQ(out.transition, Transition::Advance);
  const TechEvent table[] = {TechEvent::unlocked(Achievement::PlaceTable)};
  out = t.on_step(table, 1.0);
  EXPECT_DOUBLE_EQ(out.reward, 1.1);
  EXPECT_EQ(out.transition, Transition::Done);
}

TEST(TaskManager, TechEpisodeWithScriptedAgent) {
  // Script on a probe world, then replay the actions under the Task Manager.
  techlite::TechEnv probe;
  probe.reset(3);
  script::Recorder rec{&probe};
  ASSERT_TRUE(script::face(rec, script::tile_is(probe, techlite::Tile::Tree)));
  for (int k = 0; k < 4; ++k) rec.step(techlite::TechAction::Do);
  ASSERT_TRUE(script::face(rec, [&](techlite::Pos p) { return probe.tile(p) == techlite::Tile::Grass; }));
  rec.step(techlite::TechAction::PlaceTable);

  TechManagedEnv env;
  env.attach({{Achieve{techlite::Achievement::CollectWood, 3}, Achieve{techlite::Achievement::PlaceTable, 1}}, "t"});
  env.reset(3);
  double bonus = 0.0;
  ManagedStep s;
  for (std::size_t i = 0; i < rec.actions.size() && !env.done(); ++i) {
    s = env.step(rec.actions[i]);
    if (s.transition != Transition::Continue) bonus += 1.0;
  }
  EXPECT_TRUE(s.done);
  EXPECT_TRUE(s.success);
  EXPECT_EQ(bonus, 2.0);
  EXPECT_DOUBLE_EQ(env.tracker().cursor().bonus_total(), 2.0);
}

TEST(TaskManager, OracleOnGrammarPlans) {
  Rng rng(12);
  const auto rows = lang::generate_gridbuild_rows(rng, 60, "t");
  for (const auto& row : rows) {
    const TaskPlan plan = lang::decode_subtasks(row);
    BuildManagedEnv env;
    env.attach(plan);
    env.reset({{}, gridbuild::Mode::Flying, rng()});
    const auto r = oracle::run_oracle(env);
    ASSERT_TRUE(r.success) << row.instruction;
    EXPECT_TRUE(env.done());
    EXPECT_EQ(r.completed, plan.subtasks.size());
    EXPECT_DOUBLE_EQ(env.tracker().cursor().bonus_total(), static_cast<double>(plan.subtasks.size()));
    // Late stage with a perfect script: no penalties, reward is pure bonus.
    EXPECT_DOUBLE_EQ(r.reward, static_cast<double>(plan.subtasks.size()));
    EXPECT_EQ(env.env().grid().blocks(), final_figure(plan));
  }
}

TEST(TaskManager, OracleNeedsFlyingMode) {
  gridbuild::GridBuildEnv env;
  env.reset({{}, gridbuild::Mode::Walking, 1});
  EXPECT_THROW(oracle::plan_subtask(env, three_blocks().subtasks[0]), ConfigError);
}

// Random play: at most one bonus per subtask, episodes end only on completion
// or budget exhaustion.
TEST(TaskManagerProperty, RandomPlayBonusAndTermination) {
  Rng rng(5);
  RewardConfig cfg;
  cfg.step_budget = 60;
  for (int episode = 0; episode < 200; ++episode) {
    TaskPlan plan;
    const Cell base{rng.uniform_int(1, 9), 0, rng.uniform_int(1, 9)};
    for (int k = 0; k < 3; ++k) plan.subtasks.push_back(PlaceBlock{{base + Cell{0, k, 0}, BlockColor::Blue}});
    BuildManagedEnv env(cfg);
    env.attach(plan);
    env.reset({{}, gridbuild::Mode::Flying, rng()});
    std::size_t prev = 0;
    int since_progress = 0;
    while (!env.done()) {
      const auto s = env.step(static_cast<int>(rng.below(gridbuild::kNumActions)));
      ASSERT_GE(s.completed, prev);
      ASSERT_LE(s.completed, prev + 1);
      since_progress = s.completed > prev ? 0 : since_progress + 1;
      if (s.done) ASSERT_TRUE(s.success || since_progress == cfg.step_budget);
      prev = s.completed;
    }
    EXPECT_LE(env.tracker().cursor().bonus_total(), static_cast<double>(plan.subtasks.size()));
    EXPECT_DOUBLE_EQ(env.tracker().cursor().bonus_total(), static_cast<double>(env.tracker().cursor().index()));
  }
}
