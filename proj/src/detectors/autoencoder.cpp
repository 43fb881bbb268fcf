#include <cmath>

#include "common.hpp"
#include "odsearch/error.hpp"
#include "odsearch/rng.hpp"

namespace odsearch {

Autoencoder::Autoencoder(int input_width, int hidden, std::uint64_t seed)
    : input_(input_width), hidden_(hidden) {
  if (input_width < 1 || hidden < 1 || hidden > input_width) {
    throw Error(ErrorCode::kInvalidArgument, "AUTOENCODER needs 1 <= hidden <= input width");
  }
  Rng rng(seed);
  w1_.resize(hidden, input_width);
  w2_.resize(input_width, hidden);
  for (Eigen::Index j = 0; j < w1_.cols(); ++j)
    for (Eigen::Index i = 0; i < w1_.rows(); ++i) w1_(i, j) = rng.uniform(-0.1, 0.1);
  for (Eigen::Index j = 0; j < w2_.cols(); ++j)
    for (Eigen::Index i = 0; i < w2_.rows(); ++i) w2_(i, j) = rng.uniform(-0.1, 0.1);
  b1_ = Eigen::VectorXd::Zero(hidden);
  b2_ = Eigen::VectorXd::Zero(input_width);
}

Eigen::VectorXd Autoencoder::parameters() const {
  Eigen::VectorXd theta(w1_.size() + b1_.size() + w2_.size() + b2_.size());
  theta << w1_.reshaped(), b1_, w2_.reshaped(), b2_;
  return theta;
}

void Autoencoder::set_parameters(const Eigen::VectorXd& theta) {
  if (theta.size() != w1_.size() + b1_.size() + w2_.size() + b2_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "autoencoder parameter vector has the wrong length");
  }
  Eigen::Index at = 0;
  w1_.reshaped() = theta.segment(at, w1_.size());
  at += w1_.size();
  b1_ = theta.segment(at, b1_.size());
  at += b1_.size();
  w2_.reshaped() = theta.segment(at, w2_.size());
  at += w2_.size();
  b2_ = theta.segment(at, b2_.size());
}

Eigen::MatrixXd Autoencoder::reconstruct(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd hidden = ((X * w1_.transpose()).rowwise() + b1_.transpose()).array().tanh().matrix();
  return (hidden * w2_.transpose()).rowwise() + b2_.transpose();
}

double Autoencoder::loss(const Eigen::MatrixXd& X) const {
  return (reconstruct(X) - X).squaredNorm() / static_cast<double>(X.size());
}

Eigen::VectorXd Autoencoder::gradient(const Eigen::MatrixXd& X) const {
  const Eigen::MatrixXd hidden = ((X * w1_.transpose()).rowwise() + b1_.transpose()).array().tanh().matrix();
  const Eigen::MatrixXd out = (hidden * w2_.transpose()).rowwise() + b2_.transpose();
  const Eigen::MatrixXd d_out = 2.0 * (out - X) / static_cast<double>(X.size());
  const Eigen::MatrixXd d_w2 = d_out.transpose() * hidden;
  const Eigen::VectorXd d_b2 = d_out.colwise().sum().transpose();
  const Eigen::MatrixXd d_pre = ((d_out * w2_).array() * (1.0 - hidden.array().square())).matrix();
  const Eigen::MatrixXd d_w1 = d_pre.transpose() * X;
  const Eigen::VectorXd d_b1 = d_pre.colwise().sum().transpose();

  Eigen::VectorXd grad(w1_.size() + b1_.size() + w2_.size() + b2_.size());
  grad << d_w1.reshaped(), d_b1, d_w2.reshaped(), d_b2;
  return grad;
}

double Autoencoder::train(const Eigen::MatrixXd& X, double learning_rate, int epochs) {
  if (!(learning_rate > 0.0) || epochs < 1) {
    throw Error(ErrorCode::kInvalidArgument, "AUTOENCODER needs lr > 0 and epochs >= 1");
  }
  if (X.cols() != input_) throw Error(ErrorCode::kDimensionMismatch, "input width differs from the model");
  Eigen::VectorXd theta = parameters();
  for (int e = 0; e < epochs; ++e) {
    theta -= learning_rate * gradient(X);
    set_parameters(theta);
    const double current = loss(X);
    if (!std::isfinite(current) || !theta.allFinite()) {
      throw Error(ErrorCode::kNumericOverflow, "training loss diverged at epoch " + std::to_string(e + 1));
    }
  }
  return loss(X);
}

ScoreVector Autoencoder::row_errors(const Eigen::MatrixXd& X) const {
  const Eigen::VectorXd err = (reconstruct(X) - X).rowwise().squaredNorm();
  return ScoreVector(err.data(), err.data() + err.size());
}

ScoreVector autoencoder_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int hidden, double lr,
                               int epochs, std::uint64_t seed) {
  detail::check_fit_rows(X, n_fit);
  Autoencoder model(static_cast<int>(X.cols()), hidden, seed);
  model.train(X.topRows(n_fit), lr, epochs);
  ScoreVector scores = model.row_errors(X);
  detail::require_finite(scores, "AUTOENCODER");
  return scores;
}

ScoreVector autoencoder_scores(const Eigen::MatrixXd& X, int hidden, double lr, int epochs,
                               std::uint64_t seed) {
  return autoencoder_scores(X, X.rows(), hidden, lr, epochs, seed);
}

}  // namespace odsearch
