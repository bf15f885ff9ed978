#pragma once

#include <cstdint>

#include "gcrl/core/rng.hpp"
#include "gcrl/curriculum/sampler.hpp"

namespace gcrl::sim {

// Synthetic multi-task run: every round each task reports one outcome. Task 0
// always succeeds; the others succeed with fixed probabilities below the
// threshold. Returns the first round after which task 0's probability is
// below uniform, or -1 if that never happens within `rounds`.
inline int rounds_until_deprioritized(std::uint64_t seed, int tasks = 22, int rounds = 50,
                                      curriculum::CurriculumConfig cfg = {}) {
  Rng rng(seed);
  curriculum::TaskSampler sampler(curriculum::SamplerKind::Curriculum, cfg);
  std::vector<double> rates(static_cast<std::size_t>(tasks));
  for (int i = 0; i < tasks; ++i) {
    sampler.add_task("task" + std::to_string(i));
    rates[static_cast<std::size_t>(i)] = i == 0 ? 1.0 : 0.1 + 0.4 * rng.uniform();
  }
  const double uniform = 1.0 / tasks;
  for (int round = 1; round <= rounds; ++round) {
    for (int i = 0; i < tasks; ++i) sampler.update(static_cast<std::size_t>(i), rng.bernoulli(rates[i]) ? 1.0 : 0.0);
    if (sampler.probabilities()[0] < uniform) return round;
  }
  return -1;
}

}  // namespace gcrl::sim
