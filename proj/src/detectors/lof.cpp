#include <algorithm>

#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {
namespace {

// Keeps local reachability densities finite around exact duplicates.
constexpr double kMinMeanReach = 1e-10;

}  // namespace

ScoreVector lof_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int k) {
  detail::check_fit_rows(X, n_fit);
  if (k < 2 || k >= n_fit) {
    throw Error(ErrorCode::kTooFewRows, "LOF needs 2 <= k < fitted rows (k=" + std::to_string(k) + ")");
  }
  const Eigen::MatrixXd dist = detail::distances_to_fit(X, n_fit);
  const auto n_all = static_cast<std::size_t>(X.rows());

  std::vector<std::vector<detail::Neighbour>> neighbours(n_all);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    neighbours[static_cast<std::size_t>(i)] = detail::nearest(dist, i, n_fit, k);
  }
  std::vector<double> k_distance(static_cast<std::size_t>(n_fit));
  for (Eigen::Index o = 0; o < n_fit; ++o) {
    k_distance[static_cast<std::size_t>(o)] = neighbours[static_cast<std::size_t>(o)].back().distance;
  }

  std::vector<double> mean_reach(n_all);
  std::vector<double> lrd(n_all);
  for (std::size_t i = 0; i < n_all; ++i) {
    double sum = 0.0;
    for (const auto& nb : neighbours[i]) {
      sum += std::max(k_distance[static_cast<std::size_t>(nb.index)], nb.distance);
    }
    mean_reach[i] = sum / static_cast<double>(neighbours[i].size());
    lrd[i] = 1.0 / std::max(mean_reach[i], kMinMeanReach);
  }

  ScoreVector scores(n_all);
  for (std::size_t i = 0; i < n_all; ++i) {
    if (mean_reach[i] == 0.0) {
      scores[i] = 1.0;
      continue;
    }
    double sum = 0.0;
    for (const auto& nb : neighbours[i]) sum += lrd[static_cast<std::size_t>(nb.index)];
    scores[i] = sum / static_cast<double>(neighbours[i].size()) / lrd[i];
  }
  return scores;
}

ScoreVector lof_scores(const Eigen::MatrixXd& X, int k) { return lof_scores(X, X.rows(), k); }

}  // namespace odsearch
