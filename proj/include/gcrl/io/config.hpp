#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcrl/core/error.hpp"
#include "gcrl/curriculum/sampler.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/lang/dataset.hpp"
#include "gcrl/policy/ppo.hpp"
#include "gcrl/taskman/managed_env.hpp"
#include "gcrl/techlite/env.hpp"

namespace gcrl::io {

// Flat key=value file with [section] headers. Keys are stored as
// "section.key"; '#' starts a comment.
//
//   [ppo]
//   learning_rate = 1e-4
//   [train]
//   seeds = 1,2,3
struct ConfigEntry {
  std::string value;
  int line = 0;
};

using ConfigMap = std::map<std::string, ConfigEntry>;

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline ConfigMap parse_config(std::istream& in) {
  ConfigMap out;
  std::string line, section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) throw ConfigError("line " + std::to_string(n) + ": malformed section header");
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(n) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (out.count(full)) throw ConfigError("line " + std::to_string(n) + ": duplicate key '" + full + "'");
    out[full] = {trim(std::string_view(t).substr(eq + 1)), n};
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  return parse_config(in);
}

struct RunConfig {
  taskman::EnvKind env = taskman::EnvKind::GridBuild;
  // gridbuild: "dataset" or "adjacent"; techlite: "achievements".
  std::string task = "dataset";
  std::string dataset;
  gridbuild::Mode build_mode = gridbuild::Mode::Flying;
  techlite::WorldSize world;
  curriculum::SamplerKind sampler = curriculum::SamplerKind::Curriculum;
  curriculum::CurriculumConfig curriculum;
  taskman::RewardConfig reward;
  policy::PPOConfig ppo;
  std::vector<std::uint64_t> seeds{1};
  long total_steps = 500'000;
  double early_fraction = 0.0;
  int log_interval = 10;
  int eval_episodes = 50;
  std::string out_dir = "runs";

  void validate() const {
    ppo.validate();
    curriculum.validate();
    reward.validate();
    if (seeds.empty()) throw ConfigError("train.seeds must not be empty");
    if (total_steps < 1) throw ConfigError("train.total_steps must be >= 1");
    if (early_fraction < 0.0 || early_fraction > 1.0) throw ConfigError("train.early_fraction must lie in [0, 1]");
    if (log_interval < 1) throw ConfigError("train.log_interval must be >= 1");
    if (eval_episodes < 1) throw ConfigError("eval.episodes must be >= 1");
    if (world.width < 8 || world.height < 8) throw ConfigError("env.world_width and env.world_height must be >= 8");
    if (env == taskman::EnvKind::GridBuild) {
      if (task != "dataset" && task != "adjacent") throw ConfigError("env.task must be 'dataset' or 'adjacent' for gridbuild");
      if (task == "dataset" && dataset.empty()) throw ConfigError("env.dataset is required for gridbuild dataset tasks");
    } else if (task != "achievements") {
      throw ConfigError("env.task must be 'achievements' for techlite");
    }
    if (!dataset.empty() && !std::filesystem::exists(dataset)) {
      throw ConfigError("env.dataset: file '" + dataset + "' does not exist");
    }
  }
};

namespace detail {

inline double to_double(const std::string& key, const ConfigEntry& e) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(e.value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != e.value.size())
    throw ConfigError(key + " (line " + std::to_string(e.line) + "): expected a number, got '" + e.value + "'");
  return v;
}

inline long to_long(const std::string& key, const ConfigEntry& e) {
  const double v = to_double(key, e);
  if (v != static_cast<double>(static_cast<long>(v)))
    throw ConfigError(key + " (line " + std::to_string(e.line) + "): expected an integer, got '" + e.value + "'");
  return static_cast<long>(v);
}

inline bool to_bool(const std::string& key, const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(key + " (line " + std::to_string(e.line) + "): expected true or false, got '" + e.value + "'");
}

inline std::vector<std::uint64_t> to_seeds(const std::string& key, const ConfigEntry& e) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const long v = to_long(key, {trim(item), e.line});
    if (v < 0) throw ConfigError(key + " (line " + std::to_string(e.line) + "): seeds must be >= 0");
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

template <class F>
void wrap(const std::string& key, const ConfigEntry& e, F&& f) {
  try {
    f();
  } catch (const ConfigError& err) {
    const std::string what = err.what();
    if (what.rfind(key, 0) == 0) throw;
    throw ConfigError(key + " (line " + std::to_string(e.line) + "): " + what);
  }
}

}  // namespace detail

// Applies entries on top of `cfg`. Unknown keys are errors.
inline void apply_config(RunConfig& cfg, const ConfigMap& map) {
  using namespace detail;
  using Setter = std::function<void(const std::string&, const ConfigEntry&)>;
  const auto num = [](double& field) -> Setter {
    return [&field](const std::string& k, const ConfigEntry& e) { field = to_double(k, e); };
  };
  const auto integer = [](int& field) -> Setter {
    return [&field](const std::string& k, const ConfigEntry& e) { field = static_cast<int>(to_long(k, e)); };
  };
  const std::map<std::string, Setter> setters = {
      {"env.kind", [&](const std::string&, const ConfigEntry& e) { cfg.env = lang::env_from_name(e.value); }},
      {"env.task", [&](const std::string&, const ConfigEntry& e) { cfg.task = e.value; }},
      {"env.dataset", [&](const std::string&, const ConfigEntry& e) { cfg.dataset = e.value; }},
      {"env.build_mode", [&](const std::string&, const ConfigEntry& e) { cfg.build_mode = gridbuild::mode_from_name(e.value); }},
      {"env.world_width", integer(cfg.world.width)},
      {"env.world_height", integer(cfg.world.height)},
      {"curriculum.sampler",
       [&](const std::string&, const ConfigEntry& e) { cfg.sampler = curriculum::sampler_from_name(e.value); }},
      {"curriculum.d", num(cfg.curriculum.d)},
      {"curriculum.tau", num(cfg.curriculum.tau)},
      {"curriculum.alpha", num(cfg.curriculum.alpha)},
      {"reward.stage", [&](const std::string&, const ConfigEntry& e) { cfg.reward.stage = taskman::stage_from_name(e.value); }},
      {"reward.subtask_bonus", num(cfg.reward.subtask_bonus)},
      {"reward.env_reward_scale", num(cfg.reward.env_reward_scale)},
      {"reward.incorrect_penalty", num(cfg.reward.incorrect_penalty)},
      {"reward.proximity_shaping",
       [&](const std::string& k, const ConfigEntry& e) { cfg.reward.proximity_shaping = to_bool(k, e); }},
      {"reward.proximity_bonus", num(cfg.reward.proximity_bonus)},
      {"reward.step_budget", integer(cfg.reward.step_budget)},
      {"ppo.learning_rate", num(cfg.ppo.learning_rate)},
      {"ppo.gamma", num(cfg.ppo.gamma)},
      {"ppo.rollout_len", integer(cfg.ppo.rollout_len)},
      {"ppo.clip_epsilon", num(cfg.ppo.clip_epsilon)},
      {"ppo.batch_size", integer(cfg.ppo.batch_size)},
      {"ppo.epochs", integer(cfg.ppo.epochs)},
      {"ppo.entropy_coef", num(cfg.ppo.entropy_coef)},
      {"ppo.value_coef", num(cfg.ppo.value_coef)},
      {"ppo.gae_lambda", num(cfg.ppo.gae_lambda)},
      {"ppo.workers", integer(cfg.ppo.workers)},
      {"ppo.envs_per_worker", integer(cfg.ppo.envs_per_worker)},
      {"ppo.hidden_width", integer(cfg.ppo.hidden_width)},
      {"ppo.hidden_layers", integer(cfg.ppo.hidden_layers)},
      {"train.seeds", [&](const std::string& k, const ConfigEntry& e) { cfg.seeds = to_seeds(k, e); }},
      {"train.total_steps", [&](const std::string& k, const ConfigEntry& e) { cfg.total_steps = to_long(k, e); }},
      {"train.early_fraction", num(cfg.early_fraction)},
      {"train.log_interval", integer(cfg.log_interval)},
      {"train.out_dir", [&](const std::string&, const ConfigEntry& e) { cfg.out_dir = e.value; }},
      {"eval.episodes", integer(cfg.eval_episodes)},
  };
  for (const auto& [key, entry] : map) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "' (line " + std::to_string(entry.line) + ")");
    wrap(key, entry, [&] { it->second(key, entry); });
  }
}

inline RunConfig load_run_config(const std::string& path) {
  RunConfig cfg;
  apply_config(cfg, parse_config_file(path));
  cfg.validate();
  return cfg;
}

inline nlohmann::json to_json(const RunConfig& c) {
  return {{"env", std::string(lang::env_name(c.env))},
          {"task", c.task},
          {"dataset", c.dataset},
          {"build_mode", std::string(gridbuild::mode_name(c.build_mode))},
          {"world", {c.world.width, c.world.height}},
          {"sampler", std::string(curriculum::sampler_name(c.sampler))},
          {"curriculum", {{"d", c.curriculum.d}, {"tau", c.curriculum.tau}, {"alpha", c.curriculum.alpha}}},
          {"reward",
           {{"stage", std::string(taskman::stage_name(c.reward.stage))},
            {"subtask_bonus", c.reward.subtask_bonus},
            {"env_reward_scale", c.reward.env_reward_scale},
            {"incorrect_penalty", c.reward.incorrect_penalty},
            {"proximity_shaping", c.reward.proximity_shaping},
            {"proximity_bonus", c.reward.proximity_bonus},
            {"step_budget", c.reward.step_budget}}},
          {"ppo", policy::to_json(c.ppo)},
          {"seeds", c.seeds},
          {"total_steps", c.total_steps},
          {"early_fraction", c.early_fraction},
          {"log_interval", c.log_interval},
          {"eval_episodes", c.eval_episodes}};
}

}  // namespace gcrl::io
