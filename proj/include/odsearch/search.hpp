#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "odsearch/dataset.hpp"
#include "odsearch/search_space.hpp"
#include "odsearch/trial.hpp"

namespace odsearch {

struct SearchBudget {
  int max_trials = 60;
  int n_init = 10;  // uniform warm-start trials; clamped to max_trials
  double gamma = 0.15;
  int n_candidates = 24;
  double eda_epsilon = 0.05;
};

enum class SearchStrategy {
  kGuided,  // EDA + CMA-ES proposals ranked by the Parzen density ratio
  kRandom,  // every trial drawn by sample_uniform
};

struct SearchOptions {
  double split_ratio = 0.7;
  SearchStrategy strategy = SearchStrategy::kGuided;
  /// When false, elapsed_ms is recorded as 0 so histories are reproducible
  /// byte for byte.
  bool record_timing = false;
};

struct SearchResult {
  TrialRecord best;
  SearchHistory history;
};

using TrialCallback = std::function<void(const TrialRecord&)>;

/// Standardises with train statistics, embeds with the policy's window,
/// fits on rows that end inside train, thresholds the validation scores by
/// contamination and returns validation F1. Detector failures yield objective
/// 0 with `error` set instead of throwing.
TrialRecord evaluate_policy(const PipelinePolicy& policy, const DataSplit& split);

/// Validation-set binary prediction for a policy (the middle of
/// evaluate_policy); throws detector errors.
std::vector<std::uint8_t> predict_validation(const PipelinePolicy& policy, const DataSplit& split);

/// good = the max(1, ceil(gamma * |H|)) lowest-loss trials (ties by
/// iteration order), bad = the rest. Throws kHistoryTooSmall for |H| < 2.
std::pair<std::vector<TrialRecord>, std::vector<TrialRecord>> split_history(std::span<const TrialRecord> history,
                                                                            double gamma);

/// Runs exactly budget.max_trials evaluations and returns the lowest-loss
/// trial (earliest on ties) with the full history. Deterministic per seed.
/// Throws kNoLabels when the dataset has no anomaly window.
SearchResult run_search(const TimeSeriesDataset& ds, const SearchSpace& space, const SearchBudget& budget,
                        std::uint64_t seed, const SearchOptions& options = {},
                        const TrialCallback& on_trial = {});

/// {"iter","algorithm","discrete","continuous","f1","loss","elapsed_ms","seed"}
/// plus "error" for failed trials.
nlohmann::json trial_to_json(const TrialRecord& t);
TrialRecord trial_from_json(const nlohmann::json& doc);

}  // namespace odsearch
