#pragma once

#include <string>
#include <vector>

#include "odsearch/search_space.hpp"

namespace odsearch {

/// One evaluated policy. objective is validation F1; loss = 1 - objective.
struct TrialRecord {
  int iteration = 0;
  PipelinePolicy policy;
  double objective = 0.0;
  double loss = 1.0;
  double elapsed_ms = 0.0;
  std::string error;  // empty unless the detector failed
};

using SearchHistory = std::vector<TrialRecord>;

}  // namespace odsearch
