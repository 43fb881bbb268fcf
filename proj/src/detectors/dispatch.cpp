#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {
namespace {

std::int64_t discrete(const DetectorConfig& cfg, const char* name) {
  const auto it = cfg.discrete.find(name);
  if (it == cfg.discrete.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(algorithm_name(cfg.algorithm)) + " is missing discrete parameter " + name);
  }
  return it->second;
}

double continuous(const DetectorConfig& cfg, const char* name) {
  const auto it = cfg.continuous.find(name);
  if (it == cfg.continuous.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(algorithm_name(cfg.algorithm)) + " is missing continuous parameter " + name);
  }
  return it->second;
}

// Column z-scores with the fitted rows' mean and population deviation; a
// constant column is only centred.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& X, Eigen::Index n_fit) {
  const auto fitted = X.topRows(n_fit);
  const Eigen::RowVectorXd mean = fitted.colwise().mean();
  Eigen::RowVectorXd scale = ((fitted.rowwise() - mean).array().square().colwise().sum() /
                              static_cast<double>(n_fit))
                                 .sqrt()
                                 .matrix();
  for (Eigen::Index c = 0; c < scale.size(); ++c) {
    if (!(scale(c) > 1e-12)) scale(c) = 1.0;
  }
  return ((X.rowwise() - mean).array().rowwise() / scale.array()).matrix();
}

}  // namespace

ScoreVector fit_score(const DetectorConfig& cfg, const Eigen::MatrixXd& raw, Eigen::Index n_fit) {
  detail::check_fit_rows(raw, n_fit);
  const Eigen::MatrixXd X = standardize(raw, n_fit);
  const auto as_int = [](std::int64_t v) { return static_cast<int>(v); };

  ScoreVector scores;
  switch (cfg.algorithm) {
    case Algorithm::kKnn: {
      const auto method = discrete(cfg, "method");
      if (method < 0 || method > 2) throw Error(ErrorCode::kInvalidArgument, "KNN method must be 0, 1 or 2");
      scores = knn_scores(X, n_fit, as_int(discrete(cfg, "k")), static_cast<KnnAggregate>(method));
      break;
    }
    case Algorithm::kLof:
      scores = lof_scores(X, n_fit, as_int(discrete(cfg, "k")));
      break;
    case Algorithm::kHbos:
      scores = hbos_scores(X, n_fit, as_int(discrete(cfg, "n_bins")), continuous(cfg, "alpha"));
      break;
    case Algorithm::kIforest: {
      const auto subsample = std::min<std::int64_t>(discrete(cfg, "subsample"), n_fit);
      scores = iforest_scores(X, n_fit, as_int(discrete(cfg, "n_trees")), as_int(subsample), cfg.seed);
      break;
    }
    case Algorithm::kPca:
      scores = pca_scores(X, n_fit, continuous(cfg, "variance_fraction"));
      break;
    case Algorithm::kCblof:
      scores = cblof_scores(X, n_fit, as_int(discrete(cfg, "n_clusters")), continuous(cfg, "alpha"),
                            continuous(cfg, "beta"), cfg.seed);
      break;
    case Algorithm::kRobustCov:
      scores = robustcov_scores(X, n_fit, continuous(cfg, "support_fraction"));
      break;
    case Algorithm::kAutoencoder: {
      const auto hidden = std::min<std::int64_t>(discrete(cfg, "hidden"), X.cols());
      scores = autoencoder_scores(X, n_fit, as_int(hidden), continuous(cfg, "lr"),
                                  as_int(discrete(cfg, "epochs")), cfg.seed);
      break;
    }
  }
  detail::require_finite(scores, algorithm_name(cfg.algorithm));
  return scores;
}

ScoreVector fit_score(const DetectorConfig& cfg, const FeatureMatrix& X, Eigen::Index n_fit_rows) {
  const ScoreVector rows = fit_score(cfg, X.rows, n_fit_rows);
  return attribute_row_scores(rows, X.width);
}

}  // namespace odsearch
