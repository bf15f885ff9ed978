// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset; the exit status is non-zero if any selected
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "curriculum_sim.hpp"
#include "f1_oracle.hpp"
#include "gcrl/core/rng.hpp"
#include "gcrl/curriculum/sampler.hpp"
#include "gcrl/io/config.hpp"
#include "gcrl/lang/classify.hpp"
#include "gcrl/lang/corpus.hpp"
#include "gcrl/lang/dataset.hpp"
#include "gcrl/lang/translate.hpp"
#include "gcrl/metrics/metrics.hpp"
#include "gcrl/metrics/pipeline.hpp"
#include "gcrl/policy/ppo.hpp"
#include "gcrl/policy/tasks.hpp"
#include "gcrl/policy/trainer.hpp"
#include "lang_props.hpp"

#ifndef GCRL_SOURCE_DIR
#error "GCRL_SOURCE_DIR must name the source tree"
#endif

using namespace gcrl;
using gridbuild::BlockColor;
using gridbuild::BlockSpec;
using gridbuild::Cell;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream ss;
  ss.precision(prec);
  ss << v;
  return ss.str();
}

io::RunConfig load_config(const std::string& name) {
  io::RunConfig cfg;
  io::apply_config(cfg, io::parse_config_file(std::string(GCRL_SOURCE_DIR) + "/configs/" + name));
  return cfg;
}

// ------------------------------------------------------------------------ 1

Outcome curriculum_exactness() {
  using namespace curriculum;
  std::vector<std::string> bad;
  const CurriculumConfig cfg{10.0, 0.5, 0.1};
  TaskSampler s(SamplerKind::Curriculum, cfg);
  s.add_task("mastered");
  s.add_task("learning");
  s.set_stats(0, {0.9, 0.0, 5});
  s.set_stats(1, {0.1, 0.2, 5});
  const auto q = s.weights();
  if (std::abs(q[0] - 0.1) > 1e-9 || std::abs(q[1] - 3.0) > 1e-9) bad.push_back("weights");
  const auto p = s.probabilities();
  const double a = std::exp(0.1), b = std::exp(3.0);
  if (std::abs(p[0] - a / (a + b)) > 1e-9 || std::abs(p[1] - b / (a + b)) > 1e-9) bad.push_back("softmax");
  if (std::abs(p[0] - 0.0522) > 5e-5 || std::abs(p[1] - 0.9478) > 5e-5) bad.push_back("rounded p");

  TaskSampler br(SamplerKind::Curriculum, cfg);
  for (int i = 0; i < 3; ++i) br.add_task("t" + std::to_string(i));
  br.set_stats(0, {0.7, 0.3, 1});   // r >= tau
  br.set_stats(1, {0.2, 0.25, 1});  // r < tau
  br.set_stats(2, {0.2, 0.0, 1});   // delta = 0
  const auto w = br.weights();
  if (std::abs(w[0] - 0.1) > 1e-9 || std::abs(w[1] - 3.5) > 1e-9 || std::abs(w[2] - 1.0) > 1e-9) bad.push_back("branches");

  Outcome o;
  o.pass = bad.empty();
  o.detail = "p = [" + fmt(p[0]) + ", " + fmt(p[1]) + "]";
  for (const auto& x : bad) o.detail += "; mismatch: " + x;
  return o;
}

// ------------------------------------------------------------------------ 2

Outcome curriculum_dynamics() {
  Outcome o{true, "rounds to fall below 1/22:"};
  for (std::uint64_t seed : {1, 2, 3}) {
    const int r = sim::rounds_until_deprioritized(seed);
    o.pass = o.pass && r > 0 && r <= 50;
    o.detail += " seed " + std::to_string(seed) + "=" + std::to_string(r);
  }
  return o;
}

// ------------------------------------------------------------------------ 3

double rel_err(double a, double n) { return std::abs(a - n) / std::max({std::abs(a), std::abs(n), 1e-6}); }

Outcome gradient_oracle() {
  using namespace policy;
  Rng rng(3003);
  double worst = 0.0;
  const int nets = 25;
  for (int net = 0; net < nets; ++net) {
    const int in = 2 + static_cast<int>(rng.below(4));
    const int hidden = 3 + static_cast<int>(rng.below(4));
    const int layers = 1 + static_cast<int>(rng.below(2));
    const int actions = 2 + static_cast<int>(rng.below(4));
    Policy p(in, actions, hidden, layers);
    for (Eigen::Index i = 0; i < p.theta().size(); ++i) p.theta()(i) = 0.5 * rng.normal();
    // Old log-probs at ratio 1 or far outside the clip band keep the
    // differences away from clip kinks.
    Batch b;
    const int n = 10;
    b.obs.resize(in, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < in; ++i) b.obs(i, j) = rng.normal();
    const MatrixXd lp = log_softmax_columns(p.logits(b.obs));
    constexpr double kShift[] = {0.0, 0.5, -0.5};
    for (int j = 0; j < n; ++j) {
      const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(actions)));
      b.actions.push_back(a);
      b.old_log_probs.push_back(lp(a, j) + kShift[rng.below(3)]);
      b.advantages.push_back(rng.normal());
      b.returns.push_back(rng.normal());
    }
    PPOConfig cfg;
    cfg.entropy_coef = 0.05;
    VectorXd g;
    ppo_loss(p, b, cfg, &g);
    const double h = 1e-5;
    for (Eigen::Index i = 0; i < p.theta().size(); ++i) {
      const double keep = p.theta()(i);
      p.theta()(i) = keep + h;
      const double up = ppo_loss(p, b, cfg).total;
      p.theta()(i) = keep - h;
      const double down = ppo_loss(p, b, cfg).total;
      p.theta()(i) = keep;
      worst = std::max(worst, rel_err(g(i), (up - down) / (2.0 * h)));
    }
  }
  return {worst < 1e-4, std::to_string(nets) + " networks, max relative error " + fmt(worst, 3)};
}

// ------------------------------------------------------------------------ 4

Outcome gae_closed_forms() {
  Rng rng(4004);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(30));
    std::vector<double> r(n), v(n), zero(n, 0.0);
    std::vector<std::uint8_t> d(n);
    for (int t = 0; t < n; ++t) {
      r[t] = rng.normal();
      v[t] = rng.normal();
      d[t] = rng.bernoulli(0.2);
    }
    const double boot = rng.normal(), gamma = 0.9 + 0.1 * rng.uniform();
    // lambda = 0: one-step TD residual.
    const auto e0 = policy::compute_gae(r, v, d, boot, gamma, 0.0);
    for (int t = 0; t < n; ++t) {
      const double next = t + 1 < n ? v[t + 1] : boot;
      const double delta = r[t] + gamma * next * (d[t] ? 0.0 : 1.0) - v[t];
      worst = std::max({worst, std::abs(e0.advantages[t] - delta), std::abs(e0.returns[t] - (delta + v[t]))});
    }
    // lambda = 1: discounted return to the episode end (plus bootstrap) minus V.
    const auto e1 = policy::compute_gae(r, v, d, boot, gamma, 1.0);
    for (int t = 0; t < n; ++t) {
      double g = 0.0, disc = 1.0;
      bool ended = false;
      for (int k = t; k < n; ++k) {
        g += disc * r[k];
        disc *= gamma;
        if (d[k]) {
          ended = true;
          break;
        }
      }
      if (!ended) g += disc * boot;
      worst = std::max({worst, std::abs(e1.advantages[t] - (g - v[t])), std::abs(e1.returns[t] - g)});
    }
  }
  return {worst <= 1e-12, "max abs deviation " + fmt(worst, 3) + " over 200 random trajectories"};
}

// ------------------------------------------------------------------------ 5

Outcome learning_sanity() {
  io::RunConfig cfg = load_config("adjacent.cfg");
  if (cfg.reward.step_budget == 0) cfg.reward.step_budget = policy::kAdjacentBudget;
  const long steps = 500'000;
  const std::vector<policy::TaskSpec<taskman::BuildManagedEnv>> tasks = {
      policy::adjacent_place_task(false, cfg.build_mode)};
  const auto reward = cfg.reward;
  const auto make = [reward] { return taskman::BuildManagedEnv(reward); };
  int passing = 0;
  double seconds = 0.0;
  std::string per_seed;
  for (std::uint64_t seed : {1, 2, 3}) {
    policy::TrainConfig t;
    t.ppo = cfg.ppo;
    t.total_steps = steps;
    t.seed = seed;
    t.sampler = cfg.sampler;
    t.curriculum = cfg.curriculum;
    t.reward = cfg.reward;
    policy::Trainer<taskman::BuildManagedEnv> trainer(t, tasks, make);
    seconds += trainer.run().seconds;
    const auto ev = policy::evaluate(trainer.policy(), make(), tasks, cfg.eval_episodes, derive_seed(seed, 0xacce));
    const double s = policy::mean_success(ev);
    passing += s >= 0.9 ? 1 : 0;
    per_seed += " seed " + std::to_string(seed) + "=" + fmt(s, 3);
  }
  return {passing >= 2, std::to_string(passing) + "/3 seeds >= 0.9 at 500k steps (" + per_seed.substr(1) + "), train " +
                            fmt(seconds, 3) + " s"};
}

// ------------------------------------------------------------------------ 6

Outcome curriculum_vs_uniform() {
  io::RunConfig cfg = load_config("techlite.cfg");
  const long steps = 1'000'000;
  const int episodes = 200;
  const auto all = policy::all_achievement_tasks();
  std::vector<policy::TaskSpec<taskman::TechManagedEnv>> iron;
  for (const auto& t : all)
    if (std::count(policy::iron_tier_names().begin(), policy::iron_tier_names().end(), t.name)) iron.push_back(t);
  const auto reward = cfg.reward;
  const auto world = cfg.world;
  const auto make = [reward, world] { return taskman::TechManagedEnv(reward, world); };
  double mean[2] = {0.0, 0.0};
  std::string detail;
  const curriculum::SamplerKind kinds[2] = {curriculum::SamplerKind::Curriculum, curriculum::SamplerKind::Uniform};
  for (int k = 0; k < 2; ++k) {
    detail += std::string(k ? "; " : "") + std::string(curriculum::sampler_name(kinds[k])) + ":";
    for (std::uint64_t seed : {1, 2, 3}) {
      policy::TrainConfig t;
      t.ppo = cfg.ppo;
      t.total_steps = steps;
      t.seed = seed;
      t.sampler = kinds[k];
      t.curriculum = cfg.curriculum;
      t.reward = cfg.reward;
      policy::Trainer<taskman::TechManagedEnv> trainer(t, all, make);
      trainer.run();
      const auto ev = policy::evaluate(trainer.policy(), make(), iron, episodes, derive_seed(seed, 0xacce));
      const double s = policy::mean_success(ev);
      mean[k] += s / 3.0;
      detail += " " + fmt(s, 3);
    }
  }
  return {mean[0] >= mean[1], "iron-tier success per seed, " + detail + "; mean " + fmt(mean[0], 3) + " vs " +
                                  fmt(mean[1], 3)};
}

// ------------------------------------------------------------------------ 7

Outcome codec_goldens() {
  std::vector<std::string> bad;
  std::vector<lang::CoordEntry> table1;
  for (int x = 5; x <= 9; ++x) table1.push_back({{x, 0, 5}, 3});
  const auto prims = lang::parse_prims("(0, 5, 5), (1, 1, 5), eastsky, red");
  if (prims.size() != 1 || lang::expand_primitive(prims[0]) != table1) bad.push_back("prim expansion");
  if (lang::parse_coords("(0, 5, 5, 3), (0, 6, 5, 3), (0, 7, 5, 3), (0, 8, 5, 3), (0, 9, 5, 3)") != table1)
    bad.push_back("coords row");
  Rng rng(7007);
  int round_trips = 0, figures = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string e = props::coords_round_trip(props::random_block_set(rng));
    if (e.empty()) e = props::prims_round_trip(rng);
    if (!e.empty()) {
      bad.push_back(e);
      break;
    }
    ++round_trips;
  }
  for (int i = 0; i < 1000; ++i) {
    const std::string e = props::rotate180_props(props::random_figure(rng));
    if (!e.empty()) {
      bad.push_back(e);
      break;
    }
    ++figures;
  }
  Outcome o{bad.empty(), "Table-1 golden, " + std::to_string(round_trips) + " round trips, " + std::to_string(figures) +
                             " rotated figures"};
  for (const auto& x : bad) o.detail += "; " + x;
  return o;
}

// ------------------------------------------------------------------------ 8

Outcome metric_oracle() {
  Rng rng(8008);
  const gridbuild::Bounds small{5, 3, 5};
  const auto random_fig = [&](int max_blocks) {
    std::set<Cell> used;
    std::vector<BlockSpec> out;
    const int n = rng.uniform_int(1, max_blocks);
    while (static_cast<int>(out.size()) < n) {
      const Cell c{rng.uniform_int(0, small.x - 1), rng.uniform_int(0, small.y - 1), rng.uniform_int(0, small.z - 1)};
      if (used.insert(c).second) out.push_back({c, gridbuild::color_from_id(rng.uniform_int(1, 3))});
    }
    return out;
  };
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto target = random_fig(8);
    std::vector<BlockSpec> built;
    if (trial % 2) {
      built = random_fig(8);
    } else {
      const int dx = rng.uniform_int(-2, 2), dz = rng.uniform_int(-2, 2);
      for (const auto& b : target) {
        const Cell c = b.cell + Cell{dx, 0, dz};
        if (small.contains(c) && rng.bernoulli(0.8)) built.push_back({c, b.color});
      }
    }
    for (bool ti : {false, true}) {
      const double got = metrics::f1_score(built, target, {ti, small}).f1;
      worst = std::max(worst, std::abs(got - oracle_f1::brute_force_f1(built, target, small, ti)));
    }
  }
  std::vector<BlockSpec> target, built;
  for (int x = 0; x < 5; ++x) target.push_back({{x, 0, 0}, BlockColor::Red});
  for (int x = 0; x < 3; ++x) built.push_back({{x, 0, 0}, BlockColor::Red});
  built.push_back({{3, 0, 0}, BlockColor::Blue});
  const double f = metrics::f1_score(built, target).f1;
  return {worst <= 1e-12 && std::abs(f - 2.0 / 3.0) <= 1e-9,
          "1000 cases, max deviation from brute force " + fmt(worst, 3) + "; 3-of-4 vs 5 f1 = " + fmt(f, 10)};
}

// ------------------------------------------------------------------------ 9

Outcome oracle_pipeline() {
  Rng rng(9009);
  const auto generated = lang::generate_gridbuild_rows(rng, 60, "acc");
  std::stringstream file;
  lang::write_dataset(file, generated);
  const lang::LoadResult data = lang::load_dataset(file);
  std::vector<std::string> bad;
  if (!data.errors.empty() || data.rows.size() != generated.size()) bad.push_back("dataset reload");
  double f1_sum = 0.0, bonus = 0.0;
  std::size_t plan_total = 0;
  for (std::size_t i = 0; i < data.rows.size(); ++i) {
    const auto& lr = data.rows[i];
    const taskman::TaskPlan plan = lang::translate(lr.row.instruction, taskman::EnvKind::GridBuild, lr.row.id);
    if (lang::to_coord_entries(plan.subtasks) != lang::to_coord_entries(lr.plan.subtasks)) {
      bad.push_back("translation of " + lr.row.id + " disagrees with its stored subtasks");
    }
    const metrics::BuildEpisode e = metrics::run_build_oracle(plan, derive_seed(9, i));
    f1_sum += e.f1.f1;
    bonus += e.bonus;
    plan_total += plan.subtasks.size();
  }
  const double f1_total = data.rows.empty() ? 0.0 : f1_sum / static_cast<double>(data.rows.size());
  Outcome o{bad.empty() && f1_total == 1.0 && bonus == static_cast<double>(plan_total),
            std::to_string(data.rows.size()) + " instructions, f1 total " + fmt(f1_total, 6) + ", bonus " + fmt(bonus, 6) +
                " of " + std::to_string(plan_total)};
  for (const auto& x : bad) o.detail += "; " + x;
  return o;
}

// ----------------------------------------------------------------------- 10

Outcome classification() {
  struct Exemplar {
    std::string name;
    std::vector<Cell> cells;
    std::string expected;
  };
  std::vector<Exemplar> ex;
  {
    Exemplar row{"ground row", {}, "floor,flat"}, column{"6-column", {}, "tall"};
    for (int x = 3; x < 8; ++x) row.cells.push_back({x, 0, 5});
    for (int y = 0; y < 6; ++y) column.cells.push_back({5, y, 5});
    ex.push_back(row);
    ex.push_back(column);
  }
  ex.push_back({"elevated block", {{5, 3, 5}}, "air"});
  {
    Exemplar square{"ground square", {}, "floor,flat"}, bridge{"elevated row", {}, "flat,air"},
        tower{"elevated column", {}, "tall,air"};
    for (int x = 0; x < 3; ++x)
      for (int z = 0; z < 3; ++z) square.cells.push_back({x, 0, z});
    for (int x = 2; x < 6; ++x) bridge.cells.push_back({x, 2, 4});
    for (int y = 2; y < 8; ++y) tower.cells.push_back({1, y, 1});
    ex.push_back(square);
    ex.push_back(bridge);
    ex.push_back(tower);
  }
  int agree = 0;
  std::string bad;
  for (const auto& e : ex) {
    const std::string got = lang::to_string(lang::classify_figure(e.cells));
    if (got == e.expected) {
      ++agree;
    } else {
      bad += "; " + e.name + " -> {" + got + "}";
    }
  }
  return {agree == static_cast<int>(ex.size()),
          std::to_string(agree) + "/" + std::to_string(ex.size()) + " exemplars agree" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"curriculum exactness", curriculum_exactness},
      {"curriculum dynamics", curriculum_dynamics},
      {"PPO gradient oracle", gradient_oracle},
      {"GAE closed forms", gae_closed_forms},
      {"learning sanity", learning_sanity},
      {"curriculum vs uniform", curriculum_vs_uniform},
      {"codec goldens", codec_goldens},
      {"metric oracle", metric_oracle},
      {"oracle pipeline", oracle_pipeline},
      {"figure classification", classification},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      const int k = std::stoi(argv[i]);
      if (k < 1 || k > static_cast<int>(criteria.size())) throw std::out_of_range("criterion");
      selected.insert(k);
    } catch (const std::exception&) {
      std::cerr << "usage: acceptance [criterion 1-10 ...]\n";
      return 2;
    }
  }
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int k = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(k)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << " (" << criteria[i].first << "): " << o.detail
              << " [" << fmt(s, 3) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
