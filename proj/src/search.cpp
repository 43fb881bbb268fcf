#include "odsearch/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "odsearch/cmaes.hpp"
#include "odsearch/eda.hpp"
#include "odsearch/error.hpp"
#include "odsearch/evaluation.hpp"
#include "odsearch/parzen.hpp"

namespace odsearch {
namespace {

std::vector<double> standardized_series(const DataSplit& split) {
  const auto train = split.train.values();
  const double n = static_cast<double>(train.size());
  const double mean = std::accumulate(train.begin(), train.end(), 0.0) / n;
  double var = 0.0;
  for (const double v : train) var += (v - mean) * (v - mean);
  double sd = std::sqrt(var / n);
  if (!(sd > 1e-12)) sd = 1.0;

  std::vector<double> out;
  out.reserve(split.train.size() + split.val.size());
  for (const double v : split.train.values()) out.push_back((v - mean) / sd);
  for (const double v : split.val.values()) out.push_back((v - mean) / sd);
  return out;
}

// Per-algorithm continuous optimiser state.
struct ContinuousModel {
  CmaesState cmaes;
  std::vector<RankedCode> pending;  // evaluated CMA-ES proposals awaiting an update
};

}  // namespace

std::vector<std::uint8_t> predict_validation(const PipelinePolicy& policy, const DataSplit& split) {
  const std::size_t n_train = split.train.size();
  const std::size_t width = policy.window();
  if (width > n_train) {
    throw Error(ErrorCode::kTooFewRows, "window " + std::to_string(width) + " exceeds " +
                                            std::to_string(n_train) + " training points");
  }
  const auto series = standardized_series(split);
  const FeatureMatrix features = window_embed(series, width);
  const auto n_fit_rows = static_cast<Eigen::Index>(n_train - width + 1);
  const ScoreVector scores = fit_score(detector_config(policy), features, n_fit_rows);
  const std::span<const double> val_scores(scores.data() + n_train, split.val.size());
  return threshold_by_contamination(val_scores, policy.contamination()).bits;
}

TrialRecord evaluate_policy(const PipelinePolicy& policy, const DataSplit& split) {
  TrialRecord record;
  record.policy = policy;
  try {
    const auto predicted = predict_validation(policy, split);
    record.objective = f1_score(confusion(predicted, labels_from_windows(split.val)));
  } catch (const std::exception& e) {
    record.objective = 0.0;
    record.error = e.what();
  }
  record.loss = 1.0 - record.objective;
  return record;
}

std::pair<std::vector<TrialRecord>, std::vector<TrialRecord>> split_history(std::span<const TrialRecord> history,
                                                                            double gamma) {
  if (history.size() < 2) throw Error(ErrorCode::kHistoryTooSmall, "need at least two trials");
  std::vector<std::size_t> order(history.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (history[a].loss != history[b].loss) return history[a].loss < history[b].loss;
    return history[a].iteration < history[b].iteration;
  });
  const std::size_t n_good = flagged_count(gamma, history.size());
  std::pair<std::vector<TrialRecord>, std::vector<TrialRecord>> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_good ? out.first : out.second).push_back(history[order[i]]);
  }
  return out;
}

SearchResult run_search(const TimeSeriesDataset& ds, const SearchSpace& space, const SearchBudget& budget,
                        std::uint64_t seed, const SearchOptions& options, const TrialCallback& on_trial) {
  if (ds.windows().empty()) throw Error(ErrorCode::kNoLabels, "dataset '" + ds.name() + "' has no anomaly windows");
  if (budget.max_trials < 1 || budget.n_candidates < 1 || !(budget.gamma > 0.0 && budget.gamma < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid search budget");
  }
  const DataSplit split = chronological_split(ds, options.split_ratio);
  const int n_init = options.strategy == SearchStrategy::kRandom ? budget.max_trials
                                                                 : std::clamp(budget.n_init, 1, budget.max_trials);
  Rng rng(seed);
  EdaState eda = eda_initial(space);
  std::map<Algorithm, ContinuousModel> models;
  for (const auto& spec : space.algorithms) {
    const auto dim = static_cast<Eigen::Index>(space.continuous_domains(spec.id).size());
    models.emplace(spec.id, ContinuousModel{cmaes_initial(dim), {}});
  }

  SearchResult result;
  auto& history = result.history;
  for (int t = 1; t <= budget.max_trials; ++t) {
    PipelinePolicy policy;
    bool from_cmaes = false;
    std::vector<double> code;
    if (t <= n_init) {
      policy = sample_uniform(space, rng);
    } else {
      policy.algorithm = eda_propose_algorithm(space, eda, rng);
      policy.discrete = eda_propose(space, eda, policy.algorithm, rng);

      const auto [good, bad] = split_history(history, budget.gamma);
      std::vector<std::vector<double>> good_codes, bad_codes;
      for (const auto& g : good) {
        if (g.policy.algorithm == policy.algorithm) good_codes.push_back(encode_continuous(space, g.policy));
      }
      for (const auto& b : bad) {
        if (b.policy.algorithm == policy.algorithm) bad_codes.push_back(encode_continuous(space, b.policy));
      }
      auto& model = models.at(policy.algorithm);
      const auto dim = static_cast<std::size_t>(model.cmaes.dimension());
      if (good_codes.size() >= 2) {
        const auto l = ProductDensity::fit(good_codes, dim);
        const auto g = ProductDensity::fit(bad_codes, dim);
        double best_rank = -1.0;
        for (int c = 0; c < budget.n_candidates; ++c) {
          const Eigen::VectorXd candidate = cmaes_sample(model.cmaes, rng);
          const std::vector<double> cand(candidate.data(), candidate.data() + candidate.size());
          const double rank = ei_rank(cand, l, g);
          if (rank > best_rank) {
            best_rank = rank;
            code = cand;
          }
        }
        from_cmaes = true;
      } else {
        code.resize(dim);
        for (auto& x : code) x = rng.uniform();
      }
      policy.continuous = decode_continuous(space, policy.algorithm, code);
      policy.seed = rng.next() & 0xffffffffULL;
    }

    const auto start = std::chrono::steady_clock::now();
    TrialRecord record = evaluate_policy(policy, split);
    record.iteration = t;
    if (options.record_timing) {
      record.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    history.push_back(record);
    if (on_trial) on_trial(record);

    if (history.size() >= 2) {
      eda = eda_update(space, split_history(history, budget.gamma).first, budget.eda_epsilon);
    }
    if (from_cmaes) {
      auto& model = models.at(policy.algorithm);
      model.pending.push_back({Eigen::Map<const Eigen::VectorXd>(code.data(), static_cast<Eigen::Index>(code.size())),
                               record.loss});
      if (model.pending.size() >= cmaes_population(model.cmaes.dimension())) {
        model.cmaes = cmaes_update(model.cmaes, model.pending);
        model.pending.clear();
      }
    }
  }

  result.best = *std::min_element(history.begin(), history.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return a.loss < b.loss;
  });
  return result;
}

nlohmann::json trial_to_json(const TrialRecord& t) {
  const auto policy = policy_to_json(t.policy);
  nlohmann::json out = {{"iter", t.iteration},
                        {"algorithm", policy["algorithm"]},
                        {"discrete", policy["discrete"]},
                        {"continuous", policy["continuous"]},
                        {"f1", t.objective},
                        {"loss", t.loss},
                        {"elapsed_ms", t.elapsed_ms},
                        {"seed", t.policy.seed}};
  if (!t.error.empty()) out["error"] = t.error;
  return out;
}

TrialRecord trial_from_json(const nlohmann::json& doc) {
  try {
    TrialRecord t;
    t.iteration = doc.at("iter").get<int>();
    t.policy = policy_from_json({{"algorithm", doc.at("algorithm")},
                                 {"discrete", doc.at("discrete")},
                                 {"continuous", doc.at("continuous")},
                                 {"seed", doc.value("seed", std::uint64_t{0})}});
    t.objective = doc.at("f1").get<double>();
    t.loss = doc.at("loss").get<double>();
    t.elapsed_ms = doc.at("elapsed_ms").get<double>();
    t.error = doc.value("error", std::string{});
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace odsearch
