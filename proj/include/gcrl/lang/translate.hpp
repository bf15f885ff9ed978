#pragma once

#include <string>
#include <string_view>

#include "gcrl/lang/grammar.hpp"
#include "gcrl/lang/lexicon.hpp"
#include "gcrl/taskman/subtask.hpp"

namespace gcrl::lang {

inline taskman::TaskPlan translate(std::string_view instruction, taskman::EnvKind domain, std::string source_id = {}) {
  return domain == taskman::EnvKind::GridBuild ? translate_gridbuild(instruction, std::move(source_id))
                                               : translate_techlite(instruction, std::move(source_id));
}

}  // namespace gcrl::lang
