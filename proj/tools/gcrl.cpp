// gcrl: dataset generation, translation, training, evaluation and replay.
//
// Exit codes: 0 success, 1 user error (bad flags, config or input), 2
// internal error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcrl/io/config.hpp"
#include "gcrl/lang/augment.hpp"
#include "gcrl/lang/corpus.hpp"
#include "gcrl/lang/translate.hpp"
#include "gcrl/metrics/pipeline.hpp"
#include "gcrl/policy/tasks.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gcrl;

namespace {

// Raised for bad user input discovered after flag parsing.
struct UserError : Error {
  using Error::Error;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UserError("cannot create directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw UserError("cannot write '" + p.string() + "'");
  out << std::setprecision(10);
  return out;
}

void write_rows(const fs::path& p, const std::vector<lang::DatasetRow>& rows) {
  auto out = open_out(p);
  lang::write_dataset(out, rows);
}

lang::LoadResult load_rows(const std::string& path, bool strict) {
  lang::LoadResult r = lang::load_dataset(path);
  for (const auto& e : r.errors) std::cerr << path << ":" << e.line << ": " << e.message << '\n';
  if (strict && !r.errors.empty()) throw UserError(std::to_string(r.errors.size()) + " bad row(s) in '" + path + "'");
  return r;
}

// ---------------------------------------------------------------- dataset-gen

struct GenOptions {
  std::string out;
  std::uint64_t seed = 1;
  int train = 109;
  int test = 41;
  int tech_train = 100;
  int tech_test = 40;
};

std::vector<lang::DatasetRow> to_prims_rows(const std::vector<lang::DatasetRow>& rows) {
  std::vector<lang::DatasetRow> out;
  for (lang::DatasetRow r : rows) {
    r.format = "prims";
    r.subtasks = lang::format_prims(lang::steps_to_prims(lang::translate_gridbuild_steps(r.instruction)));
    out.push_back(std::move(r));
  }
  return out;
}

int cmd_dataset_gen(const GenOptions& o) {
  ensure_dir(o.out);
  Rng rng(derive_seed(o.seed, 0xda7a));
  const auto train = lang::generate_gridbuild_rows(rng, o.train, "gb-train");
  const auto test = lang::generate_gridbuild_rows(rng, o.test, "gb-test");
  write_rows(fs::path(o.out) / "gridbuild_train.jsonl", train);
  write_rows(fs::path(o.out) / "gridbuild_test.jsonl", test);
  write_rows(fs::path(o.out) / "gridbuild_train_prims.jsonl", to_prims_rows(train));
  write_rows(fs::path(o.out) / "gridbuild_test_prims.jsonl", to_prims_rows(test));
  write_rows(fs::path(o.out) / "techlite_train.jsonl", lang::generate_techlite_rows(rng, o.tech_train, "tl-train"));
  write_rows(fs::path(o.out) / "techlite_test.jsonl", lang::generate_techlite_rows(rng, o.tech_test, "tl-test"));
  std::cout << "wrote " << o.train << "+" << o.test << " gridbuild rows and " << o.tech_train << "+" << o.tech_test
            << " techlite rows to " << o.out << '\n';
  return 0;
}

// -------------------------------------------------------------------- augment

struct AugOptions {
  std::string in, out;
  bool rotate = false;
  std::string recolor;
  bool keep = false;
};

int cmd_augment(const AugOptions& o) {
  if (!o.rotate && o.recolor.empty()) throw UserError("augment needs --rotate180 and/or --recolor");
  const auto mapping = o.recolor.empty() ? lang::identity_mapping() : lang::parse_mapping(o.recolor);
  const lang::LoadResult in = load_rows(o.in, true);
  std::vector<lang::DatasetRow> out;
  int unaligned = 0;
  for (const auto& lr : in.rows) {
    if (lr.row.env != taskman::EnvKind::GridBuild) throw UserError("augment supports gridbuild rows only");
    if (o.keep) out.push_back(lr.row);
    lang::Sample s{lr.row.instruction, lang::to_coord_entries(lr.plan.subtasks), true};
    std::string suffix;
    if (o.rotate) {
      s = lang::augment_rotate180(s);
      suffix += "-rot";
    }
    if (!o.recolor.empty()) {
      s = lang::augment_recolor(s, mapping);
      suffix += "-rc";
    }
    lang::DatasetRow r = lr.row;
    r.id += suffix;
    r.instruction = s.instruction;
    r.format = "coords";
    r.subtasks = lang::format_coords(s.blocks);
    r.meta["aligned"] = s.aligned;
    unaligned += s.aligned ? 0 : 1;
    out.push_back(std::move(r));
  }
  write_rows(o.out, out);
  std::cout << "wrote " << out.size() << " rows to " << o.out;
  if (unaligned) std::cout << " (" << unaligned << " with text left unchanged)";
  std::cout << '\n';
  return 0;
}

// ------------------------------------------------------------------ translate

struct TranslateOptions {
  std::string env = "gridbuild";
  std::string in, out;
};

int cmd_translate(const TranslateOptions& o) {
  const taskman::EnvKind kind = lang::env_from_name(o.env);
  std::ifstream in(o.in);
  if (!in) throw UserError("cannot read '" + o.in + "'");
  std::ofstream file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& out = o.out.empty() ? std::cout : file;
  std::string line;
  std::size_t n = 0;
  int failures = 0, ok = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string id = "line-" + std::to_string(n), text = line;
    if (line.front() == '{') {
      try {
        const json j = json::parse(line);
        text = j.at("instruction").get<std::string>();
        if (j.contains("id")) id = j["id"].get<std::string>();
      } catch (const json::exception& e) {
        std::cerr << o.in << ":" << n << ": invalid JSON row: " << e.what() << '\n';
        ++failures;
        continue;
      }
    }
    try {
      lang::DatasetRow r;
      r.id = id;
      r.env = kind;
      r.instruction = text;
      if (kind == taskman::EnvKind::GridBuild) {
        const auto steps = lang::translate_gridbuild_steps(text);
        r.format = "coords";
        r.subtasks = lang::format_coords(lang::flatten(steps));
      } else {
        r.format = "ach";
        r.subtasks = lang::encode_ach(lang::translate_techlite(text, id));
      }
      out << lang::row_to_json(r).dump() << '\n';
      ++ok;
    } catch (const ParseError& e) {
      std::cerr << o.in << ":" << n << ": " << e.what() << ": \""
                << text.substr(std::min(e.begin(), text.size()), e.end() - std::min(e.begin(), e.end())) << "\"\n";
      ++failures;
    }
  }
  std::cerr << ok << " translated, " << failures << " failed\n";
  return failures ? 1 : 0;
}

// ---------------------------------------------------------------------- train

struct TrainOptions {
  std::string config;
  std::string sampler;
  std::string seeds;
  long steps = 0;
  std::string out;
};

std::vector<taskman::TaskPlan> dataset_plans(const io::RunConfig& cfg) {
  const lang::LoadResult r = load_rows(cfg.dataset, true);
  std::vector<taskman::TaskPlan> plans;
  for (const auto& lr : r.rows) {
    if (lr.row.env != cfg.env) throw UserError("dataset row " + lr.row.id + " is not a " + std::string(lang::env_name(cfg.env)) + " row");
    plans.push_back(lr.plan);
  }
  if (plans.empty()) throw UserError("dataset '" + cfg.dataset + "' has no rows");
  return plans;
}

policy::TrainConfig train_config(const io::RunConfig& cfg, std::uint64_t seed) {
  policy::TrainConfig t;
  t.ppo = cfg.ppo;
  t.total_steps = cfg.total_steps;
  t.seed = seed;
  t.sampler = cfg.sampler;
  t.curriculum = cfg.curriculum;
  t.reward = cfg.reward;
  t.early_fraction = cfg.early_fraction;
  t.log_interval = cfg.log_interval;
  return t;
}

template <class Env>
void train_one(const io::RunConfig& cfg, std::uint64_t seed, const std::vector<policy::TaskSpec<Env>>& tasks,
               const std::function<Env()>& make, const fs::path& dir) {
  ensure_dir(dir.string());
  policy::Trainer<Env> trainer(train_config(cfg, seed), tasks, make);
  auto train_csv = open_out(dir / "train.csv");
  auto cur_csv = open_out(dir / "curriculum.csv");
  const policy::TrainSummary s = trainer.run(&train_csv, &cur_csv);
  json run = io::to_json(cfg);
  run["seed"] = seed;
  policy::save_checkpoint((dir / "checkpoint.json").string(), trainer.policy(), run);
  const auto evals = policy::evaluate(trainer.policy(), make(), tasks, cfg.eval_episodes, derive_seed(seed, 0xe7a1));
  auto eval_csv = open_out(dir / "eval.csv");
  eval_csv << "task,episodes,success\n";
  for (const auto& e : evals) eval_csv << e.name << ',' << e.episodes << ',' << e.success_rate() << '\n';
  std::cout << "seed " << seed << ": " << s.steps << " steps, " << s.episodes << " episodes, " << std::fixed
            << std::setprecision(1) << s.seconds << " s, eval success " << std::setprecision(3)
            << policy::mean_success(evals) << " -> " << dir.string() << '\n';
  std::cout.unsetf(std::ios::fixed);
}

int cmd_train(const TrainOptions& o) {
  io::RunConfig cfg;
  if (!o.config.empty()) io::apply_config(cfg, io::parse_config_file(o.config));
  if (!o.sampler.empty()) cfg.sampler = curriculum::sampler_from_name(o.sampler);
  if (!o.seeds.empty()) cfg.seeds = io::detail::to_seeds("--seeds", {o.seeds, 0});
  if (o.steps > 0) cfg.total_steps = o.steps;
  if (!o.out.empty()) cfg.out_dir = o.out;
  if (cfg.env == taskman::EnvKind::GridBuild && cfg.task == "adjacent" && cfg.reward.step_budget == 0) {
    cfg.reward.step_budget = policy::kAdjacentBudget;
  }
  cfg.validate();
  const fs::path root = fs::path(cfg.out_dir) / std::string(curriculum::sampler_name(cfg.sampler));
  for (const std::uint64_t seed : cfg.seeds) {
    const fs::path dir = root / ("seed" + std::to_string(seed));
    if (cfg.env == taskman::EnvKind::GridBuild) {
      std::vector<policy::TaskSpec<taskman::BuildManagedEnv>> tasks;
      if (cfg.task == "adjacent") {
        tasks.push_back(policy::adjacent_place_task(false, cfg.build_mode));
      } else {
        tasks = policy::build_focus_tasks(dataset_plans(cfg), cfg.build_mode);
      }
      const auto reward = cfg.reward;
      train_one<taskman::BuildManagedEnv>(cfg, seed, tasks, [reward] { return taskman::BuildManagedEnv(reward); }, dir);
    } else {
      const auto reward = cfg.reward;
      const auto world = cfg.world;
      train_one<taskman::TechManagedEnv>(cfg, seed, policy::all_achievement_tasks(),
                                         [reward, world] { return taskman::TechManagedEnv(reward, world); }, dir);
    }
  }
  return 0;
}

// ----------------------------------------------------------------------- eval

struct EvalOptions {
  std::string dataset;
  std::string agent = "oracle";
  std::string checkpoint;
  std::uint64_t seed = 1;
  std::string out;
  bool record = false;
  bool plain_f1 = false;
};

struct LoadedAgent {
  bool oracle = true;
  policy::Policy policy;
  io::RunConfig cfg;
};

LoadedAgent load_agent(const std::string& agent, const std::string& checkpoint) {
  LoadedAgent a;
  if (agent == "oracle") return a;
  if (agent != "policy") throw UserError("--agent must be 'oracle' or 'policy'");
  if (checkpoint.empty()) throw UserError("--agent policy needs --checkpoint");
  policy::Checkpoint c;
  try {
    c = policy::load_checkpoint(checkpoint);
  } catch (const NumericError&) {
    throw;
  } catch (const Error& e) {
    throw UserError(e.what());
  }
  a.oracle = false;
  a.policy = std::move(c.policy);
  const json& j = c.config;
  a.cfg.env = lang::env_from_name(j.at("env").get<std::string>());
  a.cfg.build_mode = gridbuild::mode_from_name(j.at("build_mode").get<std::string>());
  a.cfg.world = {j.at("world")[0].get<int>(), j.at("world")[1].get<int>()};
  const json& r = j.at("reward");
  a.cfg.reward.stage = taskman::Stage::Late;
  a.cfg.reward.subtask_bonus = r.at("subtask_bonus");
  a.cfg.reward.env_reward_scale = r.at("env_reward_scale");
  a.cfg.reward.incorrect_penalty = r.at("incorrect_penalty");
  a.cfg.reward.step_budget = r.at("step_budget");
  return a;
}

json replay_record(const lang::DatasetRow& row, std::uint64_t seed, const std::vector<int>& actions, const json& env,
                   const json& outcome) {
  return {{"row", lang::row_to_json(row)}, {"seed", seed}, {"env", env}, {"actions", actions}, {"outcome", outcome}};
}

json build_env_json(const io::RunConfig& cfg, bool oracle) {
  return {{"mode", std::string(gridbuild::mode_name(oracle ? gridbuild::Mode::Flying : cfg.build_mode))},
          {"step_budget", cfg.reward.step_budget},
          {"incorrect_penalty", cfg.reward.incorrect_penalty},
          {"subtask_bonus", cfg.reward.subtask_bonus}};
}

json build_outcome(const metrics::BuildEpisode& e) {
  return {{"completed", std::count(e.completed.begin(), e.completed.end(), true)},
          {"f1", e.f1.f1},
          {"bonus", e.bonus},
          {"steps", e.steps}};
}

json tech_env_json(const io::RunConfig& cfg) {
  return {{"world", {cfg.world.width, cfg.world.height}},
          {"step_budget", cfg.reward.step_budget},
          {"env_reward_scale", cfg.reward.env_reward_scale},
          {"subtask_bonus", cfg.reward.subtask_bonus}};
}

json tech_outcome(const metrics::TechEpisode& e) {
  return {{"completed", std::count(e.completed.begin(), e.completed.end(), true)}, {"steps", e.steps}};
}

int cmd_eval(const EvalOptions& o) {
  ensure_dir(o.out);
  const LoadedAgent agent = load_agent(o.agent, o.checkpoint);
  const lang::LoadResult data = load_rows(o.dataset, true);
  if (data.rows.empty()) throw UserError("dataset '" + o.dataset + "' has no rows");
  const taskman::EnvKind kind = data.rows.front().row.env;
  if (!agent.oracle && agent.cfg.env != kind) throw UserError("checkpoint and dataset are for different environments");
  if (agent.oracle && kind != taskman::EnvKind::GridBuild) throw UserError("the oracle agent supports gridbuild only");
  const fs::path out(o.out);
  if (o.record) ensure_dir((out / "replays").string());
  metrics::F1Config f1cfg;
  f1cfg.translation_invariant = !o.plain_f1;

  if (kind == taskman::EnvKind::GridBuild) {
    std::vector<metrics::BuildEpisode> eps;
    json per_row = json::array();
    double bonus = 0.0;
    std::size_t plan_total = 0;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      const auto& lr = data.rows[i];
      if (lr.row.env != kind) throw UserError("dataset mixes environments");
      const std::uint64_t seed = derive_seed(o.seed, i);
      metrics::BuildEpisode e = agent.oracle
                                    ? metrics::run_build_oracle(lr.plan, seed, agent.cfg.reward, f1cfg)
                                    : metrics::run_build_policy(agent.policy, lr.plan, seed, agent.cfg.build_mode,
                                                                agent.cfg.reward, f1cfg);
      bonus += e.bonus;
      plan_total += lr.plan.subtasks.size();
      per_row.push_back(metrics::to_json(e));
      if (o.record) {
        auto f = open_out(out / "replays" / (lr.row.id + ".json"));
        f << replay_record(lr.row, seed, e.actions, build_env_json(agent.cfg, agent.oracle), build_outcome(e)).dump(1)
          << '\n';
      }
      eps.push_back(std::move(e));
    }
    auto table = open_out(out / "f1_table.csv");
    metrics::write_f1_table(table, metrics::class_results(eps));
    auto rows = open_out(out / "episodes.json");
    rows << per_row.dump(1) << '\n';
    double f1_total = 0.0;
    for (const auto& e : eps) f1_total += e.f1.f1;
    std::cout << "f1 total " << f1_total / static_cast<double>(eps.size()) << " over " << eps.size()
              << " instructions; subtask bonus " << bonus << " of " << plan_total << '\n';
    metrics::write_f1_table(std::cout, metrics::class_results(eps));
  } else {
    std::vector<metrics::TechEpisode> eps;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
      const auto& lr = data.rows[i];
      if (lr.row.env != kind) throw UserError("dataset mixes environments");
      const std::uint64_t seed = derive_seed(o.seed, i);
      metrics::TechEpisode e = metrics::run_tech_policy(agent.policy, lr.plan, seed, agent.cfg.world, agent.cfg.reward);
      if (o.record) {
        auto f = open_out(out / "replays" / (lr.row.id + ".json"));
        f << replay_record(lr.row, seed, e.actions, tech_env_json(agent.cfg), tech_outcome(e)).dump(1) << '\n';
      }
      eps.push_back(std::move(e));
    }
    const metrics::SuccessReport rep = metrics::tech_success(eps);
    auto table = open_out(out / "success_table.csv");
    metrics::write_success_table(table, rep);
    auto js = open_out(out / "success.json");
    js << metrics::to_json(rep).dump(1) << '\n';
    metrics::write_success_table(std::cout, rep);
  }
  return 0;
}

// --------------------------------------------------------------------- report

struct ReportOptions {
  std::string curriculum;
  std::string train;
  std::string out;
};

struct Wide {
  std::vector<std::string> tasks;
  std::map<long, std::map<std::string, std::string>> rows;
};

// Long CSV (interval,task,...) to one row per interval and one column per task.
Wide pivot(const std::string& path, const std::string& column) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UserError("'" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ',')) header.push_back(h);
  }
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw UserError("'" + path + "' has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ci = find("interval"), ct = find("task"), cv = find(column);
  Wide w;
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    if (f.size() != header.size()) throw UserError(path + ":" + std::to_string(n) + ": wrong number of fields");
    const long interval = std::stol(f[ci]);
    if (std::find(w.tasks.begin(), w.tasks.end(), f[ct]) == w.tasks.end()) w.tasks.push_back(f[ct]);
    w.rows[interval][f[ct]] = f[cv];
  }
  return w;
}

void write_wide(const fs::path& p, const Wide& w) {
  auto out = open_out(p);
  out << "interval";
  for (const auto& t : w.tasks) out << ',' << t;
  out << '\n';
  for (const auto& [interval, vals] : w.rows) {
    out << interval;
    for (const auto& t : w.tasks) {
      const auto it = vals.find(t);
      out << ',' << (it == vals.end() ? "" : it->second);
    }
    out << '\n';
  }
}

int cmd_report(const ReportOptions& o) {
  if (o.curriculum.empty() && o.train.empty()) throw UserError("report needs --curriculum and/or --train");
  ensure_dir(o.out);
  const fs::path out(o.out);
  if (!o.curriculum.empty()) {
    write_wide(out / "probabilities.csv", pivot(o.curriculum, "p"));
    write_wide(out / "ema_success.csv", pivot(o.curriculum, "r"));
  }
  if (!o.train.empty()) write_wide(out / "success.csv", pivot(o.train, "success"));
  std::cout << "wrote report tables to " << o.out << '\n';
  return 0;
}

// --------------------------------------------------------------------- replay

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UserError("'" + path + "' is not valid JSON: " + std::string(e.what()));
  }
  const lang::DatasetRow row = lang::row_from_json(j.at("row"));
  const taskman::TaskPlan plan = lang::decode_subtasks(row);
  const std::uint64_t seed = j.at("seed");
  const auto actions = j.at("actions").get<std::vector<int>>();
  const json& env = j.at("env");
  json outcome;
  if (row.env == taskman::EnvKind::GridBuild) {
    taskman::RewardConfig rc;
    rc.step_budget = env.at("step_budget");
    rc.incorrect_penalty = env.at("incorrect_penalty");
    rc.subtask_bonus = env.at("subtask_bonus");
    taskman::BuildManagedEnv m(rc);
    m.attach(plan);
    m.reset({{}, gridbuild::mode_from_name(env.at("mode").get<std::string>()), seed});
    for (const int a : actions) {
      if (a < 0 || a >= gridbuild::kNumActions) throw UserError("action " + std::to_string(a) + " out of range");
      if (m.done()) throw UserError("replay has actions past the end of the episode");
      m.step(a);
    }
    metrics::BuildEpisode e = metrics::finish_build_episode(m, plan, {});
    e.steps = static_cast<int>(actions.size());
    outcome = build_outcome(e);
  } else {
    taskman::RewardConfig rc;
    rc.step_budget = env.at("step_budget");
    rc.env_reward_scale = env.at("env_reward_scale");
    rc.subtask_bonus = env.at("subtask_bonus");
    const techlite::WorldSize world{env.at("world")[0].get<int>(), env.at("world")[1].get<int>()};
    taskman::TechManagedEnv m(rc, world);
    m.attach(plan);
    m.reset(seed);
    for (const int a : actions) {
      if (a < 0 || a >= techlite::kNumActions) throw UserError("action " + std::to_string(a) + " out of range");
      if (m.done()) throw UserError("replay has actions past the end of the episode");
      m.step(a);
    }
    metrics::TechEpisode e;
    e.steps = static_cast<int>(actions.size());
    e.completed = metrics::completion_mask(plan.subtasks.size(), m.tracker().cursor().index());
    outcome = tech_outcome(e);
  }
  std::cout << outcome.dump() << '\n';
  if (j.contains("outcome") && j["outcome"] != outcome) {
    std::cerr << "replay diverged from the recorded outcome " << j["outcome"].dump() << '\n';
    return 2;
  }
  return 0;
}

// ----------------------------------------------------------------------- repl

struct ReplOptions {
  std::string env = "gridbuild";
  std::string agent = "oracle";
  std::string checkpoint;
  std::uint64_t seed = 1;
};

int cmd_repl(const ReplOptions& o) {
  const taskman::EnvKind kind = lang::env_from_name(o.env);
  const LoadedAgent agent = load_agent(o.agent, o.checkpoint);
  if (agent.oracle && kind != taskman::EnvKind::GridBuild) throw UserError("the oracle agent supports gridbuild only");
  if (!agent.oracle && agent.cfg.env != kind) throw UserError("checkpoint is for a different environment");
  std::cout << "enter an instruction (empty line or :quit to exit)\n";
  std::string line;
  std::uint64_t episode = 0;
  while (std::cout << "> " << std::flush, std::getline(std::cin, line)) {
    if (line.empty() || line == ":quit") break;
    try {
      const taskman::TaskPlan plan = lang::translate(line, kind, "repl");
      std::cout << "plan:";
      for (const auto& s : plan.subtasks) std::cout << " [" << taskman::describe(s) << "]";
      std::cout << '\n';
      const std::uint64_t seed = derive_seed(o.seed, episode++);
      if (kind == taskman::EnvKind::GridBuild) {
        const auto e = agent.oracle ? metrics::run_build_oracle(plan, seed)
                                    : metrics::run_build_policy(agent.policy, plan, seed, agent.cfg.build_mode,
                                                                agent.cfg.reward);
        std::cout << "completed " << std::count(e.completed.begin(), e.completed.end(), true) << "/"
                  << plan.subtasks.size() << " subtasks in " << e.steps << " steps, f1 " << e.f1.f1 << '\n';
      } else {
        const auto e = metrics::run_tech_policy(agent.policy, plan, seed, agent.cfg.world, agent.cfg.reward);
        std::cout << "completed " << std::count(e.completed.begin(), e.completed.end(), true) << "/"
                  << plan.subtasks.size() << " subtasks in " << e.steps << " steps\n";
      }
    } catch (const ParseError& e) {
      std::cout << "cannot parse: " << e.what() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-conditioned agents driven by instruction plans"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* c_gen = app.add_subcommand("dataset-gen", "write grammar-generated JSONL corpora for both environments");
  c_gen->add_option("--out", gen.out, "output directory")->required();
  c_gen->add_option("--seed", gen.seed, "generator seed");
  c_gen->add_option("--train", gen.train, "gridbuild training rows")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--test", gen.test, "gridbuild test rows")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--techlite-train", gen.tech_train, "techlite training rows")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--techlite-test", gen.tech_test, "techlite test rows")->check(CLI::NonNegativeNumber);

  AugOptions aug;
  auto* c_aug = app.add_subcommand("augment", "rotate and/or recolor gridbuild rows");
  c_aug->add_option("--in", aug.in, "input JSONL")->required()->check(CLI::ExistingFile);
  c_aug->add_option("--out", aug.out, "output JSONL")->required();
  c_aug->add_flag("--rotate180", aug.rotate, "half-turn about the vertical axis");
  c_aug->add_option("--recolor", aug.recolor, "color mapping such as red=blue,blue=red");
  c_aug->add_flag("--keep-original", aug.keep, "also copy the input rows");

  TranslateOptions tr;
  auto* c_tr = app.add_subcommand("translate", "translate instructions into subtask plans");
  c_tr->add_option("--env", tr.env, "gridbuild or techlite")->check(CLI::IsMember({"gridbuild", "techlite"}));
  c_tr->add_option("--in", tr.in, "text lines or JSONL rows with an instruction field")->required()->check(CLI::ExistingFile);
  c_tr->add_option("--out", tr.out, "output JSONL (default stdout)");

  TrainOptions train;
  auto* c_train = app.add_subcommand("train", "train a goal-conditioned policy");
  c_train->add_option("--config", train.config, "key=value config file")->check(CLI::ExistingFile);
  c_train->add_option("--sampler", train.sampler, "uniform or curriculum")->check(CLI::IsMember({"uniform", "curriculum"}));
  c_train->add_option("--seeds", train.seeds, "comma-separated seeds");
  c_train->add_option("--steps", train.steps, "environment steps per seed")->check(CLI::PositiveNumber);
  c_train->add_option("--out", train.out, "output directory");

  EvalOptions ev;
  auto* c_eval = app.add_subcommand("eval", "evaluate an agent on a dataset");
  c_eval->add_option("--dataset", ev.dataset, "JSONL dataset")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--agent", ev.agent, "oracle or policy")->check(CLI::IsMember({"oracle", "policy"}));
  c_eval->add_option("--checkpoint", ev.checkpoint, "policy checkpoint")->check(CLI::ExistingFile);
  c_eval->add_option("--seed", ev.seed, "episode seed");
  c_eval->add_option("--out", ev.out, "output directory")->required();
  c_eval->add_flag("--record", ev.record, "write one replay file per episode");
  c_eval->add_flag("--no-translation", ev.plain_f1, "score F1 without the horizontal offset search");

  ReportOptions rep;
  auto* c_rep = app.add_subcommand("report", "pivot training logs into per-task tables");
  c_rep->add_option("--curriculum", rep.curriculum, "curriculum.csv from train")->check(CLI::ExistingFile);
  c_rep->add_option("--train", rep.train, "train.csv from train")->check(CLI::ExistingFile);
  c_rep->add_option("--out", rep.out, "output directory")->required();

  std::string replay_file;
  auto* c_replay = app.add_subcommand("replay", "re-execute a recorded episode");
  c_replay->add_option("file", replay_file, "replay JSON written by eval --record")->required()->check(CLI::ExistingFile);

  ReplOptions repl;
  auto* c_repl = app.add_subcommand("repl", "translate and execute instructions interactively");
  c_repl->add_option("--env", repl.env, "gridbuild or techlite")->check(CLI::IsMember({"gridbuild", "techlite"}));
  c_repl->add_option("--agent", repl.agent, "oracle or policy")->check(CLI::IsMember({"oracle", "policy"}));
  c_repl->add_option("--checkpoint", repl.checkpoint, "policy checkpoint")->check(CLI::ExistingFile);
  c_repl->add_option("--seed", repl.seed, "episode seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*c_gen) return cmd_dataset_gen(gen);
    if (*c_aug) return cmd_augment(aug);
    if (*c_tr) return cmd_translate(tr);
    if (*c_train) return cmd_train(train);
    if (*c_eval) return cmd_eval(ev);
    if (*c_rep) return cmd_report(rep);
    if (*c_replay) return cmd_replay(replay_file);
    if (*c_repl) return cmd_repl(repl);
  } catch (const UserError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
