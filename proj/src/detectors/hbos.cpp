#include <algorithm>
#include <cmath>

#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {
namespace {

// Smallest normalised bin height used when alpha = 0 leaves a bin empty.
constexpr double kMinHeight = 1e-12;

}  // namespace

ScoreVector hbos_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_bins, double alpha) {
  detail::check_fit_rows(X, n_fit);
  if (n_bins < 2) throw Error(ErrorCode::kInvalidArgument, "HBOS needs at least 2 bins");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "HBOS alpha outside [0, 1]");

  ScoreVector scores(static_cast<std::size_t>(X.rows()), 0.0);
  std::vector<double> counts(static_cast<std::size_t>(n_bins));
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    const auto fitted = X.col(c).head(n_fit);
    const double lo = fitted.minCoeff();
    const double hi = fitted.maxCoeff();
    if (!(hi > lo)) continue;
    const double width = (hi - lo) / n_bins;
    const auto bin_of = [&](double x) {
      const auto b = static_cast<int>(std::floor((x - lo) / width));
      return std::clamp(b, 0, n_bins - 1);
    };

    std::fill(counts.begin(), counts.end(), 0.0);
    for (Eigen::Index i = 0; i < n_fit; ++i) counts[static_cast<std::size_t>(bin_of(fitted(i)))] += 1.0;
    const double tallest = *std::max_element(counts.begin(), counts.end()) + alpha;

    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const double x = X(i, c);
      const double smoothed =
          (x < lo || x > hi) ? alpha : counts[static_cast<std::size_t>(bin_of(x))] + alpha;
      scores[static_cast<std::size_t>(i)] -= std::log(std::max(smoothed / tallest, kMinHeight));
    }
  }
  return scores;
}

ScoreVector hbos_scores(const Eigen::MatrixXd& X, int n_bins, double alpha) {
  return hbos_scores(X, X.rows(), n_bins, alpha);
}

}  // namespace odsearch
