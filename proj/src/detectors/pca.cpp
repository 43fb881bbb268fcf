#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {

ScoreVector pca_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, double variance_fraction) {
  detail::check_fit_rows(X, n_fit);
  if (!(variance_fraction > 0.0 && variance_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "variance_fraction outside (0, 1]");
  }
  const auto fitted = X.topRows(n_fit);
  const Eigen::RowVectorXd mean = fitted.colwise().mean();
  const Eigen::MatrixXd centered = fitted.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n_fit);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigen sorts ascending; walk from the largest.
  const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  ScoreVector scores(static_cast<std::size_t>(X.rows()), 0.0);
  if (!(total > 0.0)) return scores;

  const Eigen::Index d = values.size();
  Eigen::Index kept = 0;
  double explained = 0.0;
  while (kept < d) {
    explained += values(d - 1 - kept);
    ++kept;
    if (explained >= variance_fraction * total * (1.0 - 1e-12)) break;
  }
  if (kept == d) return scores;

  // Residual subspace = the d - kept smallest-eigenvalue directions.
  const Eigen::MatrixXd dropped = eig.eigenvectors().leftCols(d - kept);
  const Eigen::MatrixXd projections = (X.rowwise() - mean) * dropped;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    scores[static_cast<std::size_t>(i)] = projections.row(i).squaredNorm();
  }
  return scores;
}

ScoreVector pca_scores(const Eigen::MatrixXd& X, double variance_fraction) {
  return pca_scores(X, X.rows(), variance_fraction);
}

}  // namespace odsearch
