#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gcrl/core/error.hpp"
#include "gcrl/core/rng.hpp"

namespace gcrl::curriculum {

struct TaskStats {
  double r = 0.0;      // EMA of outcomes
  double delta = 0.0;  // EMA of |r_t - r_{t-1}|
  long n = 0;
};

struct CurriculumConfig {
  double d = 10.0;
  double tau = 0.8;
  double alpha = 0.1;

  void validate() const {
    if (!(d > 0.0)) throw ConfigError("curriculum.d must be > 0");
    if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("curriculum.tau must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("curriculum.alpha must lie in (0, 1]");
  }
};

enum class SamplerKind { Uniform, Curriculum };

inline std::string_view sampler_name(SamplerKind k) { return k == SamplerKind::Uniform ? "uniform" : "curriculum"; }

inline SamplerKind sampler_from_name(std::string_view s) {
  if (s == "uniform") return SamplerKind::Uniform;
  if (s == "curriculum") return SamplerKind::Curriculum;
  throw ConfigError("unknown sampler '" + std::string(s) + "'");
}

// Numerically stable softmax.
inline std::vector<double> softmax(const std::vector<double>& q) {
  std::vector<double> p(q.size());
  if (q.empty()) return p;
  const double m = *std::max_element(q.begin(), q.end());
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) z += (p[i] = std::exp(q[i] - m));
  for (double& v : p) v /= z;
  return p;
}

// Adaptive task sampler. Tasks at or above the success threshold get weight
// 1/d; the rest get 1 + delta*d. Weights are turned into a distribution by
// softmax. The uniform kind tracks the same statistics but always samples
// uniformly.
class TaskSampler {
 public:
  explicit TaskSampler(SamplerKind kind = SamplerKind::Curriculum, CurriculumConfig cfg = {})
      : kind_(kind), cfg_(cfg) {
    cfg_.validate();
  }

  std::size_t add_task(std::string name) {
    names_.push_back(std::move(name));
    stats_.emplace_back();
    return names_.size() - 1;
  }

  std::size_t size() const { return stats_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const TaskStats& stats(std::size_t i) const { return stats_.at(i); }
  SamplerKind kind() const { return kind_; }
  const CurriculumConfig& config() const { return cfg_; }

  void update(std::size_t task, double outcome) {
    if (task >= stats_.size()) throw ConfigError("unknown task id " + std::to_string(task));
    TaskStats& s = stats_[task];
    const double old_r = s.r;
    s.r = (1.0 - cfg_.alpha) * s.r + cfg_.alpha * outcome;
    s.delta = (1.0 - cfg_.alpha) * s.delta + cfg_.alpha * std::abs(s.r - old_r);
    ++s.n;
  }

  // Overwrites a task's statistics, e.g. when restoring a saved run.
  void set_stats(std::size_t task, const TaskStats& s) {
    if (task >= stats_.size()) throw ConfigError("unknown task id " + std::to_string(task));
    if (!(s.delta >= 0.0)) throw ConfigError("delta must be >= 0");
    stats_[task] = s;
  }

  double weight(std::size_t i) const {
    const TaskStats& s = stats_.at(i);
    return s.r >= cfg_.tau ? 1.0 / cfg_.d : 1.0 + s.delta * cfg_.d;
  }

  std::vector<double> weights() const {
    if (stats_.empty()) throw ConfigError("sampler has no tasks");
    std::vector<double> q(stats_.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = weight(i);
    return q;
  }

  std::vector<double> probabilities() const {
    if (kind_ == SamplerKind::Uniform) {
      if (stats_.empty()) throw ConfigError("sampler has no tasks");
      return std::vector<double>(stats_.size(), 1.0 / static_cast<double>(stats_.size()));
    }
    return softmax(weights());
  }

  std::size_t sample(Rng& rng) const {
    const std::vector<double> p = probabilities();
    return rng.categorical(p);
  }

  // One row per task: interval,task,r,delta,p
  void write_csv_rows(std::ostream& os, long interval) const {
    const std::vector<double> p = probabilities();
    for (std::size_t i = 0; i < stats_.size(); ++i) {
      os << interval << ',' << names_[i] << ',' << stats_[i].r << ',' << stats_[i].delta << ',' << p[i] << '\n';
    }
  }

  static constexpr std::string_view kCsvHeader = "interval,task,r,delta,p";

 private:
  SamplerKind kind_;
  CurriculumConfig cfg_;
  std::vector<std::string> names_;
  std::vector<TaskStats> stats_;
};

}  // namespace gcrl::curriculum
