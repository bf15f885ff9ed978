#pragma once

#include <string>
#include <vector>

#include "gcrl/core/rng.hpp"
#include "gcrl/lang/classify.hpp"
#include "gcrl/lang/dataset.hpp"
#include "gcrl/lang/generate.hpp"
#include "gcrl/lang/grammar.hpp"

namespace gcrl::lang {

inline std::string row_id(const std::string& prefix, int i) {
  std::string n = std::to_string(i);
  return prefix + "-" + std::string(n.size() < 4 ? 4 - n.size() : 0, '0') + n;
}

// Grammar-generated building rows in coords or prims format. Draws that leave
// the volume are redrawn.
inline std::vector<DatasetRow> generate_gridbuild_rows(Rng& rng, int count, const std::string& prefix,
                                                       const std::string& format = "coords") {
  if (format != "coords" && format != "prims") throw ConfigError("gridbuild format must be coords or prims");
  std::vector<DatasetRow> rows;
  while (static_cast<int>(rows.size()) < count) {
    const std::string text = generate_gridbuild_instruction(rng);
    std::vector<PlanStep> steps;
    try {
      steps = translate_gridbuild_steps(text);
    } catch (const ParseError&) {
      continue;
    }
    DatasetRow r;
    r.id = row_id(prefix, static_cast<int>(rows.size()));
    r.env = taskman::EnvKind::GridBuild;
    r.instruction = text;
    r.format = format;
    r.subtasks = format == "coords" ? format_coords(flatten(steps)) : format_prims(steps_to_prims(steps));
    const auto figure = taskman::final_figure({to_subtasks(flatten(steps)), {}});
    r.meta = {{"classes", to_string(classify_figure(figure))}};
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<DatasetRow> generate_techlite_rows(Rng& rng, int count, const std::string& prefix, int max_len = 3) {
  std::vector<DatasetRow> rows;
  for (int i = 0; i < count; ++i) {
    const taskman::TaskPlan plan = random_achievement_plan(rng, max_len);
    DatasetRow r;
    r.id = row_id(prefix, i);
    r.env = taskman::EnvKind::TechLite;
    r.instruction = render_techlite_instruction(rng, plan);
    r.format = "ach";
    r.subtasks = encode_ach(plan);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gcrl::lang
