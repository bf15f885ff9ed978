#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"
#include "gcrl/curriculum/sampler.hpp"
#include "gcrl/policy/ppo.hpp"
#include "gcrl/taskman/managed_env.hpp"

namespace gcrl::policy {

// A trainable task: a name for the sampler and logs, and a function that
// attaches a plan to a managed environment and resets it for one episode.
template <class Env>
struct TaskSpec {
  std::string name;
  std::function<void(Env&, Rng&)> reset;
};

struct TrainConfig {
  PPOConfig ppo;
  long total_steps = 500'000;
  std::uint64_t seed = 1;
  curriculum::SamplerKind sampler = curriculum::SamplerKind::Curriculum;
  curriculum::CurriculumConfig curriculum;
  taskman::RewardConfig reward;
  // Share of the step budget trained with the early-stage reward before
  // switching to the late stage. 0 keeps reward.stage throughout.
  double early_fraction = 0.0;
  // Updates per log interval.
  int log_interval = 10;

  void validate() const {
    ppo.validate();
    curriculum.validate();
    reward.validate();
    if (total_steps < 1) throw ConfigError("train.total_steps must be >= 1");
    if (early_fraction < 0.0 || early_fraction > 1.0) throw ConfigError("train.early_fraction must lie in [0, 1]");
    if (log_interval < 1) throw ConfigError("train.log_interval must be >= 1");
  }
};

struct IntervalStats {
  long episodes = 0;
  long successes = 0;
  double return_sum = 0.0;
};

struct TrainSummary {
  long steps = 0;
  long updates = 0;
  long episodes = 0;
  double seconds = 0.0;
  LossReport last_loss;
};

inline constexpr std::string_view kTrainCsvHeader =
    "interval,step,task,episodes,success,mean_return,loss,policy_loss,value_loss,entropy";

// PPO over W x E persistent environment slots stepped in lockstep. Each
// worker owns its slots and an rng stream; tasks are drawn from a snapshot
// of the sampler taken at the start of every rollout, and episode outcomes
// are reported back in (worker, env, time) order after the rollout.
template <class Env>
class Trainer {
 public:
  Trainer(TrainConfig cfg, std::vector<TaskSpec<Env>> tasks, std::function<Env()> make_env)
      : cfg_(std::move(cfg)), tasks_(std::move(tasks)), sampler_(cfg_.sampler, cfg_.curriculum), rng_(cfg_.seed) {
    cfg_.validate();
    if (tasks_.empty()) throw ConfigError("trainer needs at least one task");
    for (const auto& t : tasks_) sampler_.add_task(t.name);
    policy_ = Policy::make(Env::kFeatureDim, Env::kNumActions, cfg_.ppo, rng_);
    adam_ = Adam(static_cast<std::size_t>(policy_.theta().size()), cfg_.ppo.adam_beta1, cfg_.ppo.adam_beta2,
                 cfg_.ppo.adam_eps);
    const int W = cfg_.ppo.workers, E = cfg_.ppo.envs_per_worker;
    for (int w = 0; w < W; ++w) worker_rngs_.emplace_back(derive_seed(cfg_.seed, 1000 + static_cast<std::uint64_t>(w)));
    for (int i = 0; i < W * E; ++i) {
      slots_.push_back(Slot{make_env(), 0, 0.0, true});
      slots_.back().env.set_reward_config(stage_reward(0));
    }
    interval_.assign(tasks_.size(), IntervalStats{});
  }

  TrainSummary run(std::ostream* train_csv = nullptr, std::ostream* curriculum_csv = nullptr) {
    const auto t0 = std::chrono::steady_clock::now();
    if (train_csv) *train_csv << kTrainCsvHeader << '\n';
    if (curriculum_csv) *curriculum_csv << curriculum::TaskSampler::kCsvHeader << '\n';
    const long per_update = static_cast<long>(slots_.size()) * cfg_.ppo.rollout_len;
    while (summary_.steps < cfg_.total_steps) {
      const taskman::RewardConfig rc = stage_reward(summary_.steps);
      for (Slot& s : slots_) s.env.set_reward_config(rc);
      Batch batch = collect();
      summary_.last_loss = ppo_update(policy_, adam_, batch, cfg_.ppo, rng_);
      summary_.steps += per_update;
      ++summary_.updates;
      if (summary_.updates % cfg_.log_interval == 0 || summary_.steps >= cfg_.total_steps) {
        write_interval(train_csv, curriculum_csv);
      }
    }
    summary_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary_;
  }

  Policy& policy() { return policy_; }
  const Policy& policy() const { return policy_; }
  const curriculum::TaskSampler& sampler() const { return sampler_; }
  const std::vector<TaskSpec<Env>>& tasks() const { return tasks_; }
  const TrainConfig& config() const { return cfg_; }

 private:
  struct Slot {
    Env env;
    std::size_t task;
    double ret;
    bool needs_reset;
  };

  taskman::RewardConfig stage_reward(long step) const {
    taskman::RewardConfig rc = cfg_.reward;
    if (cfg_.early_fraction > 0.0) {
      rc.stage = static_cast<double>(step) < cfg_.early_fraction * static_cast<double>(cfg_.total_steps)
                     ? taskman::Stage::Early
                     : taskman::Stage::Late;
    }
    return rc;
  }

  void begin_episode(Slot& s, Rng& rng, const std::vector<double>& probs) {
    s.task = rng.categorical(probs);
    s.env.set_reward_config(stage_reward(summary_.steps));
    tasks_[s.task].reset(s.env, rng);
    s.ret = 0.0;
    s.needs_reset = false;
  }

  Batch collect() {
    const int E = cfg_.ppo.envs_per_worker;
    const int T = cfg_.ppo.rollout_len;
    const std::size_t N = slots_.size();
    const int D = Env::kFeatureDim;
    const std::vector<double> probs = sampler_.probabilities();
    std::vector<Rng*> col_rng(N);
    for (std::size_t i = 0; i < N; ++i) col_rng[i] = &worker_rngs_[i / static_cast<std::size_t>(E)];

    for (std::size_t i = 0; i < N; ++i)
      if (slots_[i].needs_reset) begin_episode(slots_[i], *col_rng[i], probs);

    // Time-major storage: index t * N + i.
    MatrixXd obs(D, static_cast<Eigen::Index>(N) * T);
    std::vector<int> actions(N * T);
    std::vector<double> logp(N * T), values(N * T), rewards(N * T);
    std::vector<std::uint8_t> dones(N * T);
    std::vector<std::vector<std::pair<std::size_t, double>>> outcomes(N);

    MatrixXd X(D, static_cast<Eigen::Index>(N));
    for (int t = 0; t < T; ++t) {
      for (std::size_t i = 0; i < N; ++i) {
        const auto f = slots_[i].env.features();
        X.col(static_cast<Eigen::Index>(i)) = ConstVecMap(f.data(), D);
      }
      const std::vector<ActResult> acts = act_batch(policy_, X, col_rng);
      obs.middleCols(static_cast<Eigen::Index>(t) * static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N)) = X;
      for (std::size_t i = 0; i < N; ++i) {
        Slot& s = slots_[i];
        const std::size_t k = static_cast<std::size_t>(t) * N + i;
        const taskman::ManagedStep st = s.env.step(acts[i].action);
        actions[k] = acts[i].action;
        logp[k] = acts[i].log_prob;
        values[k] = acts[i].value;
        rewards[k] = st.reward;
        dones[k] = st.done ? 1 : 0;
        s.ret += st.reward;
        if (st.done) {
          outcomes[i].push_back({s.task, st.success ? 1.0 : 0.0});
          IntervalStats& is = interval_[s.task];
          ++is.episodes;
          is.successes += st.success ? 1 : 0;
          is.return_sum += s.ret;
          ++summary_.episodes;
          begin_episode(s, *col_rng[i], probs);
        }
      }
    }

    for (std::size_t i = 0; i < N; ++i) {
      const auto f = slots_[i].env.features();
      X.col(static_cast<Eigen::Index>(i)) = ConstVecMap(f.data(), D);
    }
    const VectorXd boot = policy_.values(X);

    Batch b;
    b.obs = std::move(obs);
    b.actions = std::move(actions);
    b.old_log_probs = std::move(logp);
    b.advantages.assign(N * T, 0.0);
    b.returns.assign(N * T, 0.0);
    std::vector<double> r(T), v(T);
    std::vector<std::uint8_t> d(T);
    for (std::size_t i = 0; i < N; ++i) {
      for (int t = 0; t < T; ++t) {
        const std::size_t k = static_cast<std::size_t>(t) * N + i;
        r[t] = rewards[k];
        v[t] = values[k];
        d[t] = dones[k];
      }
      const AdvantageEstimates e = compute_gae(r, v, d, boot(static_cast<Eigen::Index>(i)), cfg_.ppo.gamma,
                                               cfg_.ppo.gae_lambda);
      for (int t = 0; t < T; ++t) {
        const std::size_t k = static_cast<std::size_t>(t) * N + i;
        b.advantages[k] = e.advantages[t];
        b.returns[k] = e.returns[t];
      }
    }
    normalize_advantages(b.advantages);

    for (const auto& per_slot : outcomes)
      for (const auto& [task, x] : per_slot) sampler_.update(task, x);
    return b;
  }

  void write_interval(std::ostream* train_csv, std::ostream* curriculum_csv) {
    const long interval = (summary_.updates + cfg_.log_interval - 1) / cfg_.log_interval;
    if (train_csv) {
      const LossReport& l = summary_.last_loss;
      for (std::size_t i = 0; i < tasks_.size(); ++i) {
        const IntervalStats& s = interval_[i];
        const double succ = s.episodes ? static_cast<double>(s.successes) / static_cast<double>(s.episodes) : 0.0;
        const double ret = s.episodes ? s.return_sum / static_cast<double>(s.episodes) : 0.0;
        *train_csv << interval << ',' << summary_.steps << ',' << tasks_[i].name << ',' << s.episodes << ',' << succ
                   << ',' << ret << ',' << l.total << ',' << l.policy << ',' << l.value << ',' << l.entropy << '\n';
      }
    }
    if (curriculum_csv) sampler_.write_csv_rows(*curriculum_csv, interval);
    interval_.assign(tasks_.size(), IntervalStats{});
  }

  TrainConfig cfg_;
  std::vector<TaskSpec<Env>> tasks_;
  curriculum::TaskSampler sampler_;
  Rng rng_;
  Policy policy_;
  Adam adam_;
  std::vector<Rng> worker_rngs_;
  std::vector<Slot> slots_;
  std::vector<IntervalStats> interval_;
  TrainSummary summary_;
};

struct TaskEval {
  std::string name;
  int episodes = 0;
  int successes = 0;
  double success_rate() const { return episodes ? static_cast<double>(successes) / episodes : 0.0; }
};

// Runs `episodes` episodes of every task with actions sampled from the
// policy (greedy picks the arg-max action instead). Episode j of task i
// draws from its own stream, so results do not depend on `parallel`.
template <class Env>
std::vector<TaskEval> evaluate(const Policy& policy, const Env& prototype, const std::vector<TaskSpec<Env>>& tasks,
                               int episodes, std::uint64_t seed, bool greedy = false, int parallel = 32) {
  std::vector<TaskEval> out;
  for (const auto& t : tasks) out.push_back({t.name, 0, 0});
  const std::size_t total = tasks.size() * static_cast<std::size_t>(std::max(episodes, 0));
  const std::size_t P = std::min<std::size_t>(static_cast<std::size_t>(std::max(parallel, 1)), std::max<std::size_t>(total, 1));
  struct Run {
    Env env;
    Rng rng;
    std::size_t task = 0;
    bool active = false;
  };
  std::vector<Run> runs(P, Run{prototype, Rng(0)});
  std::size_t next = 0;
  const auto start = [&](Run& r) {
    if (next >= total) {
      r.active = false;
      return;
    }
    r.task = next / static_cast<std::size_t>(episodes);
    r.rng = Rng(derive_seed(seed, next));
    tasks[r.task].reset(r.env, r.rng);
    r.active = true;
    ++next;
  };
  for (Run& r : runs) start(r);
  const int D = Env::kFeatureDim;
  std::vector<std::size_t> live;
  std::vector<Rng*> rngs;
  MatrixXd X;
  for (;;) {
    live.clear();
    rngs.clear();
    for (std::size_t i = 0; i < P; ++i)
      if (runs[i].active) {
        live.push_back(i);
        rngs.push_back(&runs[i].rng);
      }
    if (live.empty()) break;
    X.resize(D, static_cast<Eigen::Index>(live.size()));
    for (std::size_t c = 0; c < live.size(); ++c) {
      const auto f = runs[live[c]].env.features();
      X.col(static_cast<Eigen::Index>(c)) = ConstVecMap(f.data(), D);
    }
    const std::vector<ActResult> acts = act_batch(policy, X, rngs, greedy);
    for (std::size_t c = 0; c < live.size(); ++c) {
      Run& r = runs[live[c]];
      const taskman::ManagedStep st = r.env.step(acts[c].action);
      if (!st.done) continue;
      ++out[r.task].episodes;
      out[r.task].successes += st.success ? 1 : 0;
      start(r);
    }
  }
  return out;
}

inline double mean_success(const std::vector<TaskEval>& evals) {
  long n = 0, s = 0;
  for (const auto& e : evals) {
    n += e.episodes;
    s += e.successes;
  }
  return n ? static_cast<double>(s) / static_cast<double>(n) : 0.0;
}

}  // namespace gcrl::policy
