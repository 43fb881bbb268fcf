#include <algorithm>
#include <cmath>
#include <numeric>

#include "common.hpp"
#include "odsearch/error.hpp"

namespace odsearch {
namespace {

constexpr int kTrimRounds = 10;
constexpr double kRidge = 1e-6;

struct Estimate {
  Eigen::RowVectorXd mean;
  Eigen::LDLT<Eigen::MatrixXd> inverse;
};

Estimate estimate(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& rows) {
  const Eigen::Index d = X.cols();
  Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
  for (const auto r : rows) mean += X.row(r);
  mean /= static_cast<double>(rows.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const auto r : rows) {
    const Eigen::RowVectorXd c = X.row(r) - mean;
    cov.noalias() += c.transpose() * c;
  }
  cov /= static_cast<double>(rows.size());

  // All support points identical: there is no spread to model.
  if (cov.trace() <= 1e-12 * std::max(1.0, mean.squaredNorm())) {
    throw Error(ErrorCode::kSingularCovariance, "support points have no spread");
  }
  cov += kRidge * Eigen::MatrixXd::Identity(d, d);
  Estimate out{mean, cov.ldlt()};
  if (out.inverse.info() != Eigen::Success || !out.inverse.isPositive()) {
    throw Error(ErrorCode::kSingularCovariance, "covariance not positive definite after ridge");
  }
  return out;
}

Eigen::VectorXd mahalanobis_sq(const Eigen::MatrixXd& X, const Estimate& est) {
  const Eigen::MatrixXd centered = X.rowwise() - est.mean;
  const Eigen::MatrixXd solved = est.inverse.solve(centered.transpose());
  return (centered.transpose().array() * solved.array()).colwise().sum().transpose();
}

}  // namespace

ScoreVector robustcov_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, double support_fraction) {
  detail::check_fit_rows(X, n_fit);
  if (!(support_fraction >= 0.5 && support_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "support_fraction outside [0.5, 1]");
  }
  if (n_fit <= X.cols()) {
    throw Error(ErrorCode::kTooFewRows, "ROBUSTCOV needs more fitted rows than columns");
  }
  const auto n = static_cast<std::size_t>(n_fit);
  const auto keep = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::ceil(support_fraction * static_cast<double>(n) - 1e-9)),
      static_cast<std::size_t>(X.cols()) + 1, n);

  std::vector<Eigen::Index> support(n);
  std::iota(support.begin(), support.end(), Eigen::Index{0});
  Estimate est = estimate(X, support);
  const Eigen::MatrixXd fitted = X.topRows(n_fit);
  for (int round = 0; round < kTrimRounds; ++round) {
    const Eigen::VectorXd dist = mahalanobis_sq(fitted, est);
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return dist(a) < dist(b); });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    if (order == support) break;
    support = std::move(order);
    est = estimate(X, support);
  }

  const Eigen::VectorXd dist = mahalanobis_sq(X, est);
  return ScoreVector(dist.data(), dist.data() + dist.size());
}

ScoreVector robustcov_scores(const Eigen::MatrixXd& X, double support_fraction) {
  return robustcov_scores(X, X.rows(), support_fraction);
}

}  // namespace odsearch
