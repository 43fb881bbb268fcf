#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odsearch/error.hpp"

namespace odsearch {

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kKnn: return "KNN";
    case Algorithm::kLof: return "LOF";
    case Algorithm::kHbos: return "HBOS";
    case Algorithm::kIforest: return "IFOREST";
    case Algorithm::kPca: return "PCA";
    case Algorithm::kCblof: return "CBLOF";
    case Algorithm::kRobustCov: return "ROBUSTCOV";
    case Algorithm::kAutoencoder: return "AUTOENCODER";
  }
  return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (const auto a : kAllAlgorithms) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

namespace detail {

void check_fit_rows(const Eigen::MatrixXd& X, Eigen::Index n_fit) {
  if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorCode::kTooFewRows, "empty feature matrix");
  if (n_fit < 1 || n_fit > X.rows()) {
    throw Error(ErrorCode::kTooFewRows, "fit rows " + std::to_string(n_fit) + " of " +
                                            std::to_string(X.rows()));
  }
}

Eigen::MatrixXd distances_to_fit(const Eigen::MatrixXd& X, Eigen::Index n_fit) {
  Eigen::MatrixXd dist(X.rows(), n_fit);
  const Eigen::Index d = X.cols();
  for (Eigen::Index j = 0; j < n_fit; ++j) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        const double diff = X(i, c) - X(j, c);
        s += diff * diff;
      }
      dist(i, j) = std::sqrt(s);
    }
  }
  return dist;
}

std::vector<Neighbour> nearest(const Eigen::MatrixXd& dist, Eigen::Index i, Eigen::Index n_fit, int k) {
  std::vector<Neighbour> all;
  all.reserve(static_cast<std::size_t>(n_fit));
  for (Eigen::Index j = 0; j < n_fit; ++j) {
    if (j == i) continue;
    all.push_back({j, dist(i, j)});
  }
  const auto by_distance = [](const Neighbour& a, const Neighbour& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  };
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(kk), all.end(), by_distance);
  all.resize(kk);
  return all;
}

void require_finite(const ScoreVector& scores, std::string_view detector) {
  for (const double s : scores) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kNumericOverflow, std::string(detector) + " produced a non-finite score");
    }
  }
}

}  // namespace detail
}  // namespace odsearch
