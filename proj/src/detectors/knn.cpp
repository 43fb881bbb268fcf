#include <algorithm>
#include <numeric>

#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {

ScoreVector knn_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int k, KnnAggregate aggregate) {
  detail::check_fit_rows(X, n_fit);
  if (k < 1 || k >= n_fit) {
    throw Error(ErrorCode::kTooFewRows, "KNN needs k < fitted rows (k=" + std::to_string(k) + ")");
  }
  const Eigen::MatrixXd dist = detail::distances_to_fit(X, n_fit);
  ScoreVector scores(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const auto nn = detail::nearest(dist, i, n_fit, k);
    double s = 0.0;
    switch (aggregate) {
      case KnnAggregate::kLargest:
        s = nn.back().distance;
        break;
      case KnnAggregate::kMean:
        for (const auto& n : nn) s += n.distance;
        s /= static_cast<double>(nn.size());
        break;
      case KnnAggregate::kMedian: {
        const std::size_t m = nn.size();
        s = m % 2 == 1 ? nn[m / 2].distance : 0.5 * (nn[m / 2 - 1].distance + nn[m / 2].distance);
        break;
      }
    }
    scores[static_cast<std::size_t>(i)] = s;
  }
  return scores;
}

ScoreVector knn_scores(const Eigen::MatrixXd& X, int k, KnnAggregate aggregate) {
  return knn_scores(X, X.rows(), k, aggregate);
}

}  // namespace odsearch
