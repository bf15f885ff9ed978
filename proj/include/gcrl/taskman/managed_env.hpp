#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/env.hpp"
#include "gcrl/taskman/goal.hpp"
#include "gcrl/taskman/subtask.hpp"
#include "gcrl/techlite/env.hpp"

namespace gcrl::taskman {

enum class Stage { Early, Late };

inline std::string_view stage_name(Stage s) { return s == Stage::Early ? "early" : "late"; }

inline Stage stage_from_name(std::string_view s) {
  if (s == "early") return Stage::Early;
  if (s == "late") return Stage::Late;
  throw ConfigError("unknown reward stage '" + std::string(s) + "'");
}

inline constexpr int kDefaultBuildBudget = 200;
inline constexpr int kDefaultTechBudget = 500;

struct RewardConfig {
  Stage stage = Stage::Late;
  double subtask_bonus = 1.0;
  double env_reward_scale = 0.1;
  double incorrect_penalty = -0.5;
  bool proximity_shaping = true;
  double proximity_bonus = 0.02;
  // Steps allowed per subtask; 0 selects the environment default.
  int step_budget = 0;

  void validate() const {
    if (!(subtask_bonus > 0.0)) throw ConfigError("reward.subtask_bonus must be > 0");
    if (step_budget < 0) throw ConfigError("reward.step_budget must be >= 0");
  }
};

enum class Transition { Continue, Advance, Done };

struct StepOutcome {
  double reward = 0.0;
  Transition transition = Transition::Continue;
  int completed_now = 0;
};

// Shared cursor over a plan: active subtask, per-subtask step budget and the
// running bonus total.
class PlanCursor {
 public:
  PlanCursor() = default;
  PlanCursor(std::vector<Subtask> subtasks, int budget) : subtasks_(std::move(subtasks)), budget_(budget) {}

  bool finished() const { return index_ >= subtasks_.size(); }
  std::size_t index() const { return index_; }
  std::size_t size() const { return subtasks_.size(); }
  const Subtask& active() const { return subtasks_[std::min(index_, subtasks_.size() - 1)]; }
  const std::vector<Subtask>& subtasks() const { return subtasks_; }
  double bonus_total() const { return bonus_total_; }
  bool budget_exhausted() const { return budget_ > 0 && steps_on_active_ >= budget_; }

  void restart() {
    index_ = 0;
    steps_on_active_ = 0;
    bonus_total_ = 0.0;
  }

  void complete(double bonus, StepOutcome& out) {
    bonus_total_ += bonus;
    out.reward += bonus;
    ++out.completed_now;
    ++index_;
    steps_on_active_ = 0;
    out.transition = finished() ? Transition::Done : Transition::Advance;
  }

  // Counts one environment step; ends the episode when the budget runs out.
  void tick(StepOutcome& out) {
    if (finished()) return;
    ++steps_on_active_;
    if (budget_exhausted()) out.transition = Transition::Done;
  }

 private:
  std::vector<Subtask> subtasks_;
  std::size_t index_ = 0;
  int budget_ = 0;
  int steps_on_active_ = 0;
  double bonus_total_ = 0.0;
};

// Completion detection and reward for block subtasks.
class BuildTracker {
 public:
  BuildTracker() = default;
  BuildTracker(std::vector<Subtask> subtasks, RewardConfig cfg)
      : cfg_(cfg), cursor_(std::move(subtasks), cfg.step_budget > 0 ? cfg.step_budget : kDefaultBuildBudget) {}

  void reset(const gridbuild::AgentPose& pose) {
    cursor_.restart();
    best_distance_ = distance_to_goal(pose);
  }

  StepOutcome on_step(std::span<const gridbuild::BuildEvent> events, const gridbuild::AgentPose& pose) {
    using gridbuild::BuildEvent;
    StepOutcome out;
    for (const BuildEvent& ev : events) {
      if (cursor_.finished()) break;
      const Subtask& goal = cursor_.active();
      if (matches(ev, goal)) {
        cursor_.complete(cfg_.subtask_bonus, out);
        best_distance_ = cursor_.finished() ? 0 : distance_to_goal(pose);
      } else if (cfg_.stage == Stage::Late) {
        out.reward += cfg_.incorrect_penalty;
      } else {
        out.reward += 1.0 / (gridbuild::chebyshev(ev.block.cell, goal_cell(goal)) + 1.0);
      }
    }
    if (cfg_.stage == Stage::Early && cfg_.proximity_shaping && !cursor_.finished()) {
      const int d = distance_to_goal(pose);
      if (d < best_distance_) {
        out.reward += cfg_.proximity_bonus;
        best_distance_ = d;
      }
    }
    cursor_.tick(out);
    return out;
  }

  const PlanCursor& cursor() const { return cursor_; }
  const RewardConfig& config() const { return cfg_; }

  static gridbuild::Cell goal_cell(const Subtask& s) {
    if (const auto* p = std::get_if<PlaceBlock>(&s)) return p->block.cell;
    return std::get<RemoveBlock>(s).cell;
  }

  static bool matches(const gridbuild::BuildEvent& ev, const Subtask& goal) {
    using Kind = gridbuild::BuildEvent::Kind;
    if (const auto* p = std::get_if<PlaceBlock>(&goal)) return ev.kind == Kind::Placed && ev.block == p->block;
    if (const auto* r = std::get_if<RemoveBlock>(&goal)) return ev.kind == Kind::Removed && ev.block.cell == r->cell;
    return false;
  }

 private:
  int distance_to_goal(const gridbuild::AgentPose& pose) const {
    if (cursor_.finished()) return 0;
    return gridbuild::chebyshev(pose.cell, goal_cell(cursor_.active()));
  }

  RewardConfig cfg_;
  PlanCursor cursor_;
  int best_distance_ = 0;
};

// Completion detection and reward for achievement subtasks. Occurrences are
// counted from the moment a subtask becomes active.
class TechTracker {
 public:
  TechTracker() = default;
  TechTracker(std::vector<Subtask> subtasks, RewardConfig cfg)
      : cfg_(cfg), cursor_(std::move(subtasks), cfg.step_budget > 0 ? cfg.step_budget : kDefaultTechBudget) {}

  void reset() {
    cursor_.restart();
    progress_ = 0;
  }

  StepOutcome on_step(std::span<const techlite::TechEvent> events, double env_reward) {
    StepOutcome out;
    out.reward = cfg_.env_reward_scale * env_reward;
    for (const techlite::TechEvent& ev : events) {
      if (cursor_.finished()) break;
      const auto& goal = std::get<Achieve>(cursor_.active());
      if (!counts_toward(ev, goal.achievement)) continue;
      if (++progress_ >= goal.count) {
        progress_ = 0;
        cursor_.complete(cfg_.subtask_bonus, out);
      }
    }
    cursor_.tick(out);
    return out;
  }

  static bool counts_toward(const techlite::TechEvent& ev, techlite::Achievement a) {
    using Kind = techlite::TechEvent::Kind;
    if (const auto res = techlite::collected_resource(a)) {
      return ev.kind == Kind::ResourceCollected && ev.resource == *res;
    }
    return ev.kind == Kind::AchievementUnlocked && ev.achievement == a;
  }

  int progress() const { return progress_; }
  const PlanCursor& cursor() const { return cursor_; }
  const RewardConfig& config() const { return cfg_; }

 private:
  RewardConfig cfg_;
  PlanCursor cursor_;
  int progress_ = 0;
};

struct ManagedStep {
  double reward = 0.0;
  Transition transition = Transition::Continue;
  bool done = false;
  // All subtasks of the active plan completed.
  bool success = false;
  std::size_t completed = 0;
};

// Task Manager over the voxel building environment.
class BuildManagedEnv {
 public:
  static constexpr int kFeatureDim = gridbuild::kObservationFeatures + kBuildGoalDim + 3 + 1 + 3 + 3;
  static constexpr int kNumActions = gridbuild::kNumActions;

  explicit BuildManagedEnv(RewardConfig cfg = {}, gridbuild::EnvConfig env_cfg = {})
      : cfg_(cfg), env_(env_cfg) {
    cfg_.validate();
  }
  BuildManagedEnv(gridbuild::GridBuildEnv env, RewardConfig cfg) : cfg_(cfg), env_(std::move(env)) { cfg_.validate(); }

  void attach(TaskPlan plan) {
    validate_plan(plan, EnvKind::GridBuild);
    plan_ = std::move(plan);
    attached_ = true;
  }

  void set_reward_config(const RewardConfig& cfg) {
    cfg.validate();
    cfg_ = cfg;
  }

  // With `focus` set (training mode) the blocks of every subtask before the
  // focus are pre-built and only the focus subtask is issued.
  void reset(const gridbuild::BuildTask& task, std::optional<std::size_t> focus = std::nullopt) {
    if (!attached_) throw ConfigError("no plan attached");
    gridbuild::BuildTask start = task;
    std::vector<Subtask> active = plan_.subtasks;
    if (focus) {
      if (*focus >= plan_.subtasks.size()) throw ConfigError("training focus index out of range");
      TaskPlan prefix{{plan_.subtasks.begin(), plan_.subtasks.begin() + static_cast<std::ptrdiff_t>(*focus)}, {}};
      start.initial_blocks = final_figure(prefix, task.initial_blocks);
      active = {plan_.subtasks[*focus]};
    }
    obs_ = env_.reset(start);
    tracker_ = BuildTracker(std::move(active), cfg_);
    tracker_.reset(obs_.pose);
    done_ = false;
    refresh_features();
  }

  ManagedStep step(gridbuild::BuildAction action) {
    if (done_) throw std::logic_error("BuildManagedEnv::step after episode end");
    gridbuild::BuildStep s = env_.step(action);
    obs_ = std::move(s.obs);
    last_events_ = std::move(s.events);
    const StepOutcome o = tracker_.on_step(last_events_, obs_.pose);
    ManagedStep out;
    out.reward = o.reward;
    out.transition = o.transition;
    out.done = o.transition == Transition::Done;
    out.success = tracker_.cursor().finished();
    out.completed = tracker_.cursor().index();
    done_ = out.done;
    refresh_features();
    return out;
  }

  ManagedStep step(int action) { return step(static_cast<gridbuild::BuildAction>(action)); }

  std::span<const double> features() const { return features_; }
  GoalVector goal() const { return encode_goal(tracker_.cursor().active()); }
  const gridbuild::BuildObservation& observation() const { return obs_; }
  const gridbuild::GridBuildEnv& env() const { return env_; }
  const BuildTracker& tracker() const { return tracker_; }
  const TaskPlan& plan() const { return plan_; }
  const std::vector<gridbuild::BuildEvent>& last_events() const { return last_events_; }
  bool done() const { return done_; }

 private:
  void refresh_features() {
    using namespace gridbuild;
    features_.clear();
    observation_features(obs_, env_.config().inventory_capacity, features_);
    const Subtask& s = tracker_.cursor().active();
    encode_goal_into(s, features_);
    // Goal fused with the agent's frame.
    const Cell g = BuildTracker::goal_cell(s);
    const Cell t = target_cell(obs_.pose);
    const Cell a = obs_.pose.cell;
    features_.push_back((g.x - t.x) / 10.0);
    features_.push_back((g.y - t.y) / 8.0);
    features_.push_back((g.z - t.z) / 10.0);
    features_.push_back(g == t ? 1.0 : 0.0);
    features_.push_back((g.x - a.x) / 10.0);
    features_.push_back((g.y - a.y) / 8.0);
    features_.push_back((g.z - a.z) / 10.0);
    const auto* place = std::get_if<PlaceBlock>(&s);
    features_.push_back(place && place->block.color == obs_.selected ? 1.0 : 0.0);
    features_.push_back(obs_.grid.at(g) != 0 ? 1.0 : 0.0);
    features_.push_back(place && obs_.grid.at(g) == color_id(place->block.color) ? 1.0 : 0.0);
  }

  RewardConfig cfg_;
  gridbuild::GridBuildEnv env_;
  TaskPlan plan_;
  bool attached_ = false;
  BuildTracker tracker_;
  gridbuild::BuildObservation obs_;
  std::vector<gridbuild::BuildEvent> last_events_;
  std::vector<double> features_;
  bool done_ = true;
};

// Task Manager over the survival/crafting environment.
class TechManagedEnv {
 public:
  static constexpr int kFeatureDim = techlite::kObservationFeatures + kTechGoalDim + 1;
  static constexpr int kNumActions = techlite::kNumActions;

  explicit TechManagedEnv(RewardConfig cfg = {}, techlite::WorldSize size = {}) : cfg_(cfg), size_(size) {
    cfg_.validate();
  }

  void attach(TaskPlan plan) {
    validate_plan(plan, EnvKind::TechLite);
    plan_ = std::move(plan);
    attached_ = true;
  }

  void set_reward_config(const RewardConfig& cfg) {
    cfg.validate();
    cfg_ = cfg;
  }

  void reset(std::uint64_t seed, std::optional<std::size_t> focus = std::nullopt) {
    if (!attached_) throw ConfigError("no plan attached");
    std::vector<Subtask> active = plan_.subtasks;
    if (focus) {
      if (*focus >= plan_.subtasks.size()) throw ConfigError("training focus index out of range");
      active = {plan_.subtasks[*focus]};
    }
    obs_ = env_.reset(seed, size_);
    tracker_ = TechTracker(std::move(active), cfg_);
    tracker_.reset();
    done_ = false;
    refresh_features();
  }

  ManagedStep step(techlite::TechAction action) {
    if (done_) throw std::logic_error("TechManagedEnv::step after episode end");
    techlite::TechStep s = env_.step(action);
    obs_ = std::move(s.obs);
    last_events_ = std::move(s.events);
    const StepOutcome o = tracker_.on_step(last_events_, s.env_reward);
    ManagedStep out;
    out.reward = o.reward;
    out.transition = o.transition;
    out.done = o.transition == Transition::Done;
    out.success = tracker_.cursor().finished();
    out.completed = tracker_.cursor().index();
    done_ = out.done;
    refresh_features();
    return out;
  }

  ManagedStep step(int action) { return step(static_cast<techlite::TechAction>(action)); }

  std::span<const double> features() const { return features_; }
  GoalVector goal() const { return encode_goal(tracker_.cursor().active()); }
  const techlite::TechObservation& observation() const { return obs_; }
  const techlite::TechEnv& env() const { return env_; }
  const TechTracker& tracker() const { return tracker_; }
  const TaskPlan& plan() const { return plan_; }
  const std::vector<techlite::TechEvent>& last_events() const { return last_events_; }
  bool done() const { return done_; }

 private:
  void refresh_features() {
    features_.clear();
    techlite::observation_features(obs_, features_);
    const auto& goal = std::get<Achieve>(tracker_.cursor().active());
    encode_goal_into(goal, features_);
    features_.push_back((goal.count - tracker_.progress()) / kCountScale);
  }

  RewardConfig cfg_;
  techlite::WorldSize size_;
  techlite::TechEnv env_;
  TaskPlan plan_;
  bool attached_ = false;
  TechTracker tracker_;
  techlite::TechObservation obs_;
  std::vector<techlite::TechEvent> last_events_;
  std::vector<double> features_;
  bool done_ = true;
};

inline BuildManagedEnv attach(gridbuild::GridBuildEnv env, TaskPlan plan, RewardConfig cfg) {
  BuildManagedEnv managed(std::move(env), cfg);
  managed.attach(std::move(plan));
  return managed;
}

inline TechManagedEnv attach(techlite::WorldSize size, TaskPlan plan, RewardConfig cfg) {
  TechManagedEnv managed(cfg, size);
  managed.attach(std::move(plan));
  return managed;
}

}  // namespace gcrl::taskman
