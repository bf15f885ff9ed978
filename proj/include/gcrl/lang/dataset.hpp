#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcrl/core/error.hpp"
#include "gcrl/lang/codec.hpp"
#include "gcrl/lang/lexicon.hpp"
#include "gcrl/lang/normalize.hpp"
#include "gcrl/lang/prims.hpp"
#include "gcrl/taskman/subtask.hpp"

namespace gcrl::lang {

using json = nlohmann::json;

inline std::string_view env_name(taskman::EnvKind k) { return k == taskman::EnvKind::GridBuild ? "gridbuild" : "techlite"; }

inline taskman::EnvKind env_from_name(std::string_view s) {
  if (s == "gridbuild") return taskman::EnvKind::GridBuild;
  if (s == "techlite") return taskman::EnvKind::TechLite;
  throw ConfigError("unknown env '" + std::string(s) + "'");
}

struct DatasetRow {
  std::string id;
  taskman::EnvKind env = taskman::EnvKind::GridBuild;
  std::string instruction;
  std::string format;  // coords | prims | ach
  json subtasks;       // string for coords/prims, array of strings for ach
  json meta = json::object();
};

struct LoadedRow {
  std::size_t line = 0;
  DatasetRow row;
  taskman::TaskPlan plan;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  std::vector<LoadedRow> rows;
  std::vector<RowError> errors;
};

inline json row_to_json(const DatasetRow& r) {
  json j = {{"id", r.id},
            {"env", std::string(env_name(r.env))},
            {"instruction", r.instruction},
            {"subtasks", r.subtasks},
            {"format", r.format}};
  if (!r.meta.empty()) j["meta"] = r.meta;
  return j;
}

inline DatasetRow row_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("row is not a JSON object");
  for (const char* key : {"id", "env", "instruction", "subtasks", "format"}) {
    if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  }
  DatasetRow r;
  if (!j["id"].is_string() || !j["env"].is_string() || !j["instruction"].is_string() || !j["format"].is_string()) {
    throw ConfigError("fields id, env, instruction and format must be strings");
  }
  r.id = j["id"].get<std::string>();
  r.env = env_from_name(j["env"].get<std::string>());
  r.instruction = j["instruction"].get<std::string>();
  r.format = j["format"].get<std::string>();
  r.subtasks = j["subtasks"];
  if (j.contains("meta")) r.meta = j["meta"];
  return r;
}

// Plan encoded by the row's subtasks field. Coords rows keep their stored
// order; prims rows are expanded box by box and normalized.
inline taskman::TaskPlan decode_subtasks(const DatasetRow& r, const AxisConvention& conv = {}) {
  taskman::TaskPlan plan;
  plan.source_id = r.id;
  if (r.format == "coords" || r.format == "prims") {
    if (r.env != taskman::EnvKind::GridBuild) throw ConfigError("format '" + r.format + "' requires env gridbuild");
    if (!r.subtasks.is_string()) throw ConfigError("subtasks must be a string for format '" + r.format + "'");
    const std::string text = r.subtasks.get<std::string>();
    if (r.format == "coords") {
      plan.subtasks = to_subtasks(parse_coords(text, conv));
    } else {
      std::vector<PlanStep> steps;
      for (const PrimitiveSpec& p : parse_prims(text)) steps.push_back({p.color_id == 0, expand_primitive(p, conv)});
      plan = normalize_plan(std::move(steps), r.id);
    }
  } else if (r.format == "ach") {
    if (r.env != taskman::EnvKind::TechLite) throw ConfigError("format 'ach' requires env techlite");
    if (!r.subtasks.is_array()) throw ConfigError("subtasks must be an array for format 'ach'");
    for (const json& e : r.subtasks) {
      if (!e.is_string()) throw ConfigError("achievement entries must be strings");
      plan.subtasks.emplace_back(parse_achievement_entry(e.get<std::string>()));
    }
  } else {
    throw ConfigError("unknown format '" + r.format + "'");
  }
  taskman::validate_plan(plan, r.env);
  return plan;
}

// Reads JSON lines; blank lines are skipped. Bad rows are reported with
// their 1-based line number and do not stop loading.
inline LoadResult load_dataset(std::istream& in, const AxisConvention& conv = {}) {
  LoadResult out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      LoadedRow lr;
      lr.line = n;
      lr.row = row_from_json(json::parse(line));
      lr.plan = decode_subtasks(lr.row, conv);
      out.rows.push_back(std::move(lr));
    } catch (const json::exception& e) {
      out.errors.push_back({n, std::string("invalid JSON: ") + e.what()});
    } catch (const Error& e) {
      out.errors.push_back({n, e.what()});
    }
  }
  return out;
}

inline LoadResult load_dataset(const std::string& path, const AxisConvention& conv = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset '" + path + "'");
  return load_dataset(in, conv);
}

inline void write_dataset(std::ostream& os, const std::vector<DatasetRow>& rows) {
  for (const DatasetRow& r : rows) os << row_to_json(r).dump() << '\n';
}

inline json encode_ach(const taskman::TaskPlan& plan) {
  json arr = json::array();
  for (const auto& s : plan.subtasks) arr.push_back(format_achievement_entry(std::get<taskman::Achieve>(s)));
  return arr;
}

// Prims for normalized steps: one box per placement step, removal steps as
// one box when they cover a full box and one cell each otherwise.
inline std::vector<PrimitiveSpec> steps_to_prims(const std::vector<PlanStep>& steps, const AxisConvention& conv = {}) {
  std::vector<PrimitiveSpec> out;
  for (const PlanStep& st : steps) {
    if (st.entries.empty()) continue;
    Cell lo = st.entries.front().cell, hi = lo;
    for (const CoordEntry& e : st.entries) {
      lo = {std::min(lo.x, e.cell.x), std::min(lo.y, e.cell.y), std::min(lo.z, e.cell.z)};
      hi = {std::max(hi.x, e.cell.x), std::max(hi.y, e.cell.y), std::max(hi.z, e.cell.z)};
    }
    const Cell ext{hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1};
    const bool one_color = std::all_of(st.entries.begin(), st.entries.end(),
                                       [&](const CoordEntry& e) { return e.color_id == st.entries.front().color_id; });
    if (one_color && static_cast<int>(st.entries.size()) == ext.x * ext.y * ext.z) {
      out.push_back(box_to_primitive(lo, ext, st.entries.front().color_id, conv));
    } else {
      for (const CoordEntry& e : st.entries) out.push_back(box_to_primitive(e.cell, {1, 1, 1}, e.color_id, conv));
    }
  }
  return out;
}

}  // namespace gcrl::lang
