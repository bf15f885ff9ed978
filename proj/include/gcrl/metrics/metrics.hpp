#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "gcrl/core/error.hpp"
#include "gcrl/gridbuild/types.hpp"
#include "gcrl/lang/classify.hpp"
#include "gcrl/taskman/subtask.hpp"
#include "gcrl/techlite/types.hpp"

namespace gcrl::metrics {

using gridbuild::BlockSpec;
using gridbuild::Cell;

struct F1Config {
  bool translation_invariant = true;
  gridbuild::Bounds bounds{};
};

struct F1Report {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Cell best_offset{0, 0, 0};
  int matches = 0;
};

inline double harmonic(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

inline F1Report make_report(int matches, std::size_t built, std::size_t target, Cell offset) {
  F1Report r;
  r.matches = matches;
  r.best_offset = offset;
  r.precision = built ? static_cast<double>(matches) / static_cast<double>(built) : 0.0;
  r.recall = static_cast<double>(matches) / static_cast<double>(target);
  r.f1 = harmonic(r.precision, r.recall);
  return r;
}

// A block matches when cell and color agree. With translation invariance the
// built figure may be shifted horizontally by any offset that keeps it in
// bounds; the offset with the most matches wins, ties going to (0, 0) and
// then to the lexicographically smallest (dx, dz).
inline F1Report f1_score(const std::vector<BlockSpec>& built, const std::vector<BlockSpec>& target,
                         const F1Config& cfg = {}) {
  if (target.empty()) throw ConfigError("f1 is undefined for an empty target");
  std::map<std::tuple<int, int, int, int>, int> target_index;
  for (const BlockSpec& b : target) {
    if (!target_index.emplace(std::tuple{b.cell.x, b.cell.y, b.cell.z, gridbuild::color_id(b.color)}, 0).second)
      throw ConfigError("target contains a duplicate cell");
  }
  const auto count_at = [&](int dx, int dz) {
    int m = 0;
    for (const BlockSpec& b : built) {
      if (target_index.count({b.cell.x + dx, b.cell.y, b.cell.z + dz, gridbuild::color_id(b.color)})) ++m;
    }
    return m;
  };
  if (!cfg.translation_invariant || built.empty()) return make_report(count_at(0, 0), built.size(), target.size(), {});

  // Only offsets that line up at least one same-colored pair can beat zero.
  std::map<std::pair<int, int>, int> votes;
  for (const BlockSpec& b : built)
    for (const BlockSpec& t : target)
      if (b.cell.y == t.cell.y && b.color == t.color) ++votes[{t.cell.x - b.cell.x, t.cell.z - b.cell.z}];

  Cell lo = built.front().cell, hi = lo;
  for (const BlockSpec& b : built) {
    lo = {std::min(lo.x, b.cell.x), 0, std::min(lo.z, b.cell.z)};
    hi = {std::max(hi.x, b.cell.x), 0, std::max(hi.z, b.cell.z)};
  }
  const auto fits = [&](int dx, int dz) {
    return lo.x + dx >= 0 && hi.x + dx < cfg.bounds.x && lo.z + dz >= 0 && hi.z + dz < cfg.bounds.z;
  };
  int best = fits(0, 0) ? count_at(0, 0) : -1;
  std::pair<int, int> best_off{0, 0};
  for (const auto& [off, m] : votes) {
    if (m > best && fits(off.first, off.second)) {
      best = m;
      best_off = off;
    }
  }
  if (best < 0) best = 0;
  return make_report(best, built.size(), target.size(), {best_off.first, 0, best_off.second});
}

struct EpisodeRecord {
  taskman::TaskPlan plan;
  std::vector<bool> completed;  // per subtask
};

struct SuccessReport {
  double total = 0.0;
  std::map<std::string, double> per_subtask;
  std::map<std::string, int> support;  // instructions requiring each subtask
  int instructions = 0;
};

inline std::string subtask_key(const taskman::Subtask& s) {
  if (const auto* a = std::get_if<taskman::Achieve>(&s)) return std::string(techlite::achievement_name(a->achievement));
  return std::holds_alternative<taskman::PlaceBlock>(s) ? "place_block" : "remove_block";
}

inline SuccessReport success_report(const std::vector<EpisodeRecord>& episodes) {
  SuccessReport r;
  r.instructions = static_cast<int>(episodes.size());
  std::map<std::string, int> done;
  int full = 0;
  for (const EpisodeRecord& e : episodes) {
    if (e.completed.size() != e.plan.subtasks.size()) throw ConfigError("completion vector does not match plan length");
    const bool all = std::all_of(e.completed.begin(), e.completed.end(), [](bool b) { return b; });
    full += all ? 1 : 0;
    // Each instruction counts once per distinct subtask it requires.
    std::map<std::string, bool> seen;
    for (std::size_t i = 0; i < e.plan.subtasks.size(); ++i) {
      const std::string key = subtask_key(e.plan.subtasks[i]);
      auto [it, fresh] = seen.emplace(key, e.completed[i]);
      if (!fresh) it->second = it->second && e.completed[i];
    }
    for (const auto& [key, ok] : seen) {
      ++r.support[key];
      done[key] += ok ? 1 : 0;
    }
  }
  r.total = episodes.empty() ? 0.0 : static_cast<double>(full) / static_cast<double>(episodes.size());
  for (const auto& [key, n] : r.support) r.per_subtask[key] = static_cast<double>(done[key]) / n;
  return r;
}

struct ClassResult {
  lang::FigureClass classes;
  double f1 = 0.0;
};

inline std::map<std::string, double> class_breakdown(const std::vector<ClassResult>& results) {
  std::map<std::string, double> sum;
  std::map<std::string, int> count;
  for (const ClassResult& r : results) {
    for (std::string_view label : lang::kFigureLabels) {
      if (!lang::has_label(r.classes, label)) continue;
      sum[std::string(label)] += r.f1;
      ++count[std::string(label)];
    }
  }
  std::map<std::string, double> out;
  for (const auto& [label, s] : sum) out[label] = s / count[label];
  return out;
}

inline nlohmann::json to_json(const F1Report& r) {
  return {{"precision", r.precision},
          {"recall", r.recall},
          {"f1", r.f1},
          {"matches", r.matches},
          {"best_offset", {r.best_offset.x, r.best_offset.y, r.best_offset.z}}};
}

inline nlohmann::json to_json(const SuccessReport& r) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [k, v] : r.per_subtask) per[k] = {{"success", v}, {"support", r.support.at(k)}};
  return {{"total", r.total}, {"instructions", r.instructions}, {"per_subtask", per}};
}

// Table layout: one row per figure class plus the total.
inline void write_f1_table(std::ostream& os, const std::vector<ClassResult>& results) {
  const auto by_class = class_breakdown(results);
  double total = 0.0;
  for (const ClassResult& r : results) total += r.f1;
  os << "class,f1,n\n";
  for (std::string_view label : lang::kFigureLabels) {
    const auto it = by_class.find(std::string(label));
    if (it == by_class.end()) continue;
    int n = 0;
    for (const ClassResult& r : results) n += lang::has_label(r.classes, label) ? 1 : 0;
    os << label << ',' << it->second << ',' << n << '\n';
  }
  os << "total," << (results.empty() ? 0.0 : total / static_cast<double>(results.size())) << ',' << results.size()
     << '\n';
}

inline void write_success_table(std::ostream& os, const SuccessReport& r) {
  os << "subtask,success,support\n";
  for (const auto& [k, v] : r.per_subtask) os << k << ',' << v << ',' << r.support.at(k) << '\n';
  os << "total," << r.total << ',' << r.instructions << '\n';
}

}  // namespace gcrl::metrics
