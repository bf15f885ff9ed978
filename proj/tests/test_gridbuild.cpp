#include <gtest/gtest.h>

#include <set>

#include "gcrl/core/rng.hpp"
#include "gcrl/gridbuild/env.hpp"

using namespace gcrl;
using namespace gcrl::gridbuild;

namespace {

// Turns the agent until its level target lies inside the volume.
void face_inside(GridBuildEnv& env) {
  for (int k = 0; k < 4 && !in_bounds(target_cell(env.pose())); ++k) env.step(BuildAction::TurnRight);
  ASSERT_TRUE(in_bounds(target_cell(env.pose())));
}

std::vector<BlockSpec> random_blocks(Rng& rng, int n) {
  std::set<Cell> used;
  std::vector<BlockSpec> out;
  while (static_cast<int>(out.size()) < n) {
    const Cell c{rng.uniform_int(0, kSizeX - 1), rng.uniform_int(0, 3), rng.uniform_int(0, kSizeZ - 1)};
    if (!used.insert(c).second) continue;
    out.push_back({c, color_from_id(rng.uniform_int(1, kNumColors))});
  }
  return out;
}

bool has_support_below(const VoxelGrid& g, Cell c) { return c.y == 0 || g.occupied(c + Cell{0, -1, 0}); }

}  // namespace

TEST(GridBuild, ActionSetHasThirteenDiscreteCoreActions) {
  EXPECT_EQ(kNumDiscreteCoreActions, 13);
  EXPECT_EQ(static_cast<int>(BuildAction::SelectYellow) + 1, 13);
  EXPECT_EQ(action_from_name("place"), BuildAction::Place);
  EXPECT_EQ(action_name(BuildAction::MoveDown), "move_down");
}

TEST(GridBuild, ColorCodes) {
  EXPECT_EQ(color_id(BlockColor::Blue), 1);
  EXPECT_EQ(color_id(BlockColor::Yellow), 6);
  EXPECT_EQ(color_from_name("orange"), BlockColor::Orange);
  EXPECT_FALSE(valid_color_id(0));
  EXPECT_FALSE(valid_color_id(7));
}

TEST(GridBuild, EmptyWalkingResetSpawnsOnFloor) {
  GridBuildEnv env;
  const auto obs = env.reset({{}, Mode::Walking, 7});
  EXPECT_EQ(obs.grid.occupied_count(), 0);
  EXPECT_EQ(obs.pose.cell.y, 0);
  for (int v : obs.inventory) EXPECT_EQ(v, 20);
}

TEST(GridBuild, InitialBlocksAndInventory) {
  GridBuildEnv env;
  const auto obs = env.reset({{{{5, 0, 5}, BlockColor::Red}}, Mode::Walking, 1});
  EXPECT_EQ(obs.grid.occupied_count(), 1);
  EXPECT_EQ(obs.inventory[color_id(BlockColor::Red) - 1], 19);
  EXPECT_EQ(obs.inventory[color_id(BlockColor::Blue) - 1], 20);
  EXPECT_FALSE(obs.grid.occupied(obs.pose.cell));
}

TEST(GridBuild, ResetIsDeterministic) {
  GridBuildEnv a, b;
  const BuildTask task{{{{3, 0, 3}, BlockColor::Green}}, Mode::Flying, 42};
  EXPECT_EQ(a.reset(task), b.reset(task));
}

TEST(GridBuild, RejectsInvalidTasks) {
  GridBuildEnv env;
  EXPECT_THROW(env.reset({{{{11, 0, 0}, BlockColor::Red}}, Mode::Walking, 0}), ConfigError);
  EXPECT_THROW(env.reset({{{{0, -1, 0}, BlockColor::Red}}, Mode::Walking, 0}), ConfigError);
  EXPECT_THROW(env.reset({{{{1, 0, 1}, BlockColor::Red}, {{1, 0, 1}, BlockColor::Blue}}, Mode::Walking, 0}),
               ConfigError);
  GridBuildEnv small({2});
  EXPECT_THROW(small.reset({{{{0, 0, 0}, BlockColor::Red}, {{1, 0, 0}, BlockColor::Red}, {{2, 0, 0}, BlockColor::Red}},
                            Mode::Walking, 0}),
               ConfigError);
}

TEST(GridBuild, PlaceOnFloorEmitsEvent) {
  GridBuildEnv env;
  env.reset({{}, Mode::Walking, 3});
  face_inside(env);
  env.step(BuildAction::SelectRed);
  const Cell t = target_cell(env.pose());
  const auto s = env.step(BuildAction::Place);
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].kind, BuildEvent::Kind::Placed);
  EXPECT_EQ(s.events[0].block, (BlockSpec{t, BlockColor::Red}));
  EXPECT_EQ(t.y, 0);
  EXPECT_EQ(s.obs.inventory[color_id(BlockColor::Red) - 1], 19);
}

TEST(GridBuild, BreakOnEmptyIsNoop) {
  GridBuildEnv env;
  const auto before = env.reset({{}, Mode::Walking, 3});
  const auto s = env.step(BuildAction::Break);
  EXPECT_TRUE(s.events.empty());
  EXPECT_EQ(s.obs.grid, before.grid);
}

TEST(GridBuild, PlaceThenBreakRestoresCount) {
  GridBuildEnv env;
  env.reset({{{{0, 0, 0}, BlockColor::Blue}}, Mode::Walking, 5});
  face_inside(env);
  const int before = env.grid().occupied_count();
  ASSERT_EQ(env.step(BuildAction::Place).events.size(), 1u);
  EXPECT_EQ(env.grid().occupied_count(), before + 1);
  const auto s = env.step(BuildAction::Break);
  ASSERT_EQ(s.events.size(), 1u);
  EXPECT_EQ(s.events[0].kind, BuildEvent::Kind::Removed);
  EXPECT_EQ(env.grid().occupied_count(), before);
  EXPECT_EQ(env.inventory()[0], 19);
}

TEST(GridBuild, FloatingPlacementNeedsSupport) {
  GridBuildEnv env;
  env.reset({{}, Mode::Flying, 3});
  for (int k = 0; k < 3; ++k) env.step(BuildAction::MoveUp);
  ASSERT_EQ(env.pose().cell.y, 3);
  face_inside(env);
  EXPECT_TRUE(env.step(BuildAction::Place).events.empty());
  // A block beneath the target makes it supported.
  GridBuildEnv env2;
  env2.reset({{}, Mode::Flying, 3});
  face_inside(env2);
  const Cell base = target_cell(env2.pose());
  ASSERT_EQ(env2.step(BuildAction::Place).events.size(), 1u);
  env2.step(BuildAction::MoveUp);
  ASSERT_EQ(target_cell(env2.pose()), (base + Cell{0, 1, 0}));
  EXPECT_EQ(env2.step(BuildAction::Place).events.size(), 1u);
}

TEST(GridBuild, InventoryExhaustionBlocksPlacement) {
  GridBuildEnv env({1});
  env.reset({{}, Mode::Flying, 9});
  face_inside(env);
  ASSERT_EQ(env.step(BuildAction::Place).events.size(), 1u);
  env.step(BuildAction::LookUp);
  EXPECT_TRUE(env.step(BuildAction::Place).events.empty());
}

TEST(GridBuild, WalkingIgnoresVerticalMoves) {
  GridBuildEnv env;
  env.reset({{}, Mode::Walking, 11});
  const Cell c = env.pose().cell;
  env.step(BuildAction::MoveUp);
  EXPECT_EQ(env.pose().cell, c);
}

TEST(GridBuild, TaskJsonRoundTrip) {
  const BuildTask task{{{{1, 2, 3}, BlockColor::Purple}}, Mode::Flying, 77};
  const BuildTask back = task_from_json(task_to_json(task));
  EXPECT_EQ(back.initial_blocks, task.initial_blocks);
  EXPECT_EQ(back.mode, task.mode);
  EXPECT_EQ(back.seed, task.seed);
  EXPECT_THROW(task_from_json(nlohmann::json::parse(R"({"blocks":[[1,2]]})")), ConfigError);
}

TEST(GridBuild, StepBeforeResetThrows) {
  GridBuildEnv env;
  EXPECT_THROW(env.step(BuildAction::Noop), std::logic_error);
}

// Random action fuzzing over both modes: conservation, event consistency,
// occupancy bookkeeping and walking support.
TEST(GridBuildProperty, FuzzInvariants) {
  Rng rng(2024);
  for (int episode = 0; episode < 200; ++episode) {
    const Mode mode = episode % 2 ? Mode::Walking : Mode::Flying;
    GridBuildEnv env;
    const BuildTask task{random_blocks(rng, rng.uniform_int(0, 12)), mode, rng()};
    env.reset(task);
    int expected = static_cast<int>(task.initial_blocks.size());
    for (int t = 0; t < 300; ++t) {
      const auto action = static_cast<BuildAction>(rng.below(kNumActions));
      const auto s = env.step(action);
      ASSERT_LE(s.events.size(), 1u);
      for (const auto& ev : s.events) {
        if (ev.kind == BuildEvent::Kind::Placed) {
          ASSERT_EQ(s.obs.grid.at(ev.block.cell), color_id(ev.block.color));
          ++expected;
        } else {
          ASSERT_FALSE(s.obs.grid.occupied(ev.block.cell));
          --expected;
        }
      }
      ASSERT_EQ(s.obs.grid.occupied_count(), expected);
      ASSERT_GE(expected, 0);
      for (int c = 1; c <= kNumColors; ++c) {
        ASSERT_GE(s.obs.inventory[c - 1], 0);
        ASSERT_EQ(s.obs.inventory[c - 1] + s.obs.grid.count_color(color_from_id(c)), 20);
      }
      ASSERT_TRUE(in_bounds(s.obs.pose.cell));
      ASSERT_FALSE(s.obs.grid.occupied(s.obs.pose.cell));
      if (mode == Mode::Walking) ASSERT_TRUE(has_support_below(s.obs.grid, s.obs.pose.cell));
    }
  }
}

TEST(GridBuildProperty, SameActionsSameTrajectory) {
  Rng rng(99);
  for (int episode = 0; episode < 20; ++episode) {
    const BuildTask task{random_blocks(rng, 6), episode % 2 ? Mode::Walking : Mode::Flying, rng()};
    std::vector<BuildAction> actions;
    for (int t = 0; t < 200; ++t) actions.push_back(static_cast<BuildAction>(rng.below(kNumActions)));
    GridBuildEnv a, b;
    ASSERT_EQ(a.reset(task), b.reset(task));
    for (BuildAction act : actions) {
      const auto sa = a.step(act);
      const auto sb = b.step(act);
      ASSERT_EQ(sa.events, sb.events);
      ASSERT_EQ(sa.obs, sb.obs);
    }
  }
}

TEST(GridBuild, FeatureLength) {
  GridBuildEnv env;
  const auto obs = env.reset({{}, Mode::Flying, 1});
  std::vector<double> f;
  observation_features(obs, 20, f);
  EXPECT_EQ(static_cast<int>(f.size()), kObservationFeatures);
}
