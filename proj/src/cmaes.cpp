#include "odsearch/cmaes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

void refresh_eigensystem(CmaesState& s) {
  s.cov = 0.5 * (s.cov + s.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.cov);
  Eigen::VectorXd values = eig.eigenvalues();
  const double top = std::max(values.maxCoeff(), 1e-300);
  // Keep C positive definite: floor eigenvalues relative to the largest.
  bool floored = false;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) < top * 1e-14) {
      values(i) = top * 1e-14;
      floored = true;
    }
  }
  s.basis = eig.eigenvectors();
  s.scales = values.cwiseSqrt();
  if (floored) s.cov = s.basis * values.asDiagonal() * s.basis.transpose();
}

}  // namespace

CmaesState cmaes_initial(Eigen::Index dimension, double sigma) {
  if (dimension < 1) throw Error(ErrorCode::kInvalidArgument, "CMA-ES needs at least one dimension");
  CmaesState s;
  s.mean = Eigen::VectorXd::Constant(dimension, 0.5);
  s.sigma = std::clamp(sigma, kMinSigma, kMaxSigma);
  s.cov = Eigen::MatrixXd::Identity(dimension, dimension);
  s.path_sigma = Eigen::VectorXd::Zero(dimension);
  s.path_c = Eigen::VectorXd::Zero(dimension);
  s.basis = Eigen::MatrixXd::Identity(dimension, dimension);
  s.scales = Eigen::VectorXd::Ones(dimension);
  return s;
}

std::size_t cmaes_population(Eigen::Index dimension) {
  return 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(static_cast<double>(dimension))));
}

Eigen::VectorXd cmaes_sample_unclamped(const CmaesState& state, Rng& rng) {
  Eigen::VectorXd z(state.dimension());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  return state.mean + state.sigma * (state.basis * (state.scales.asDiagonal() * z));
}

Eigen::VectorXd cmaes_sample(const CmaesState& state, Rng& rng) {
  return cmaes_sample_unclamped(state, rng).cwiseMax(0.0).cwiseMin(1.0);
}

CmaesState cmaes_update(const CmaesState& state, std::span<const RankedCode> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::kTooFewSamples, "CMA-ES update needs at least two samples");
  const Eigen::Index n = state.dimension();
  for (const auto& s : samples) {
    if (s.code.size() != n) throw Error(ErrorCode::kDimensionMismatch, "sample dimension differs from state");
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return samples[a].loss < samples[b].loss; });

  const double lambda = static_cast<double>(samples.size());
  const std::size_t mu = samples.size() / 2;
  Eigen::VectorXd weights(static_cast<Eigen::Index>(mu));
  for (std::size_t i = 0; i < mu; ++i) {
    weights(static_cast<Eigen::Index>(i)) = std::log((lambda + 1.0) / 2.0) - std::log(static_cast<double>(i + 1));
  }
  weights /= weights.sum();
  const double mueff = 1.0 / weights.squaredNorm();
  const double nd = static_cast<double>(n);

  const double cc = (4.0 + mueff / nd) / (nd + 4.0 + 2.0 * mueff / nd);
  const double cs = (mueff + 2.0) / (nd + mueff + 5.0);
  const double c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mueff);
  const double cmu = std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((nd + 2.0) * (nd + 2.0) + mueff));
  const double damps = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (nd + 1.0)) - 1.0) + cs;
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  CmaesState next = state;
  next.mean = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd steps(n, static_cast<Eigen::Index>(mu));
  for (std::size_t i = 0; i < mu; ++i) {
    const auto& x = samples[order[i]].code;
    next.mean += weights(static_cast<Eigen::Index>(i)) * x;
    steps.col(static_cast<Eigen::Index>(i)) = (x - state.mean) / state.sigma;
  }
  const Eigen::VectorXd y_w = (next.mean - state.mean) / state.sigma;

  // C^(-1/2) y_w
  const Eigen::VectorXd whitened =
      state.basis * (state.basis.transpose() * y_w).cwiseQuotient(state.scales);
  next.path_sigma = (1.0 - cs) * state.path_sigma + std::sqrt(cs * (2.0 - cs) * mueff) * whitened;

  next.generation = state.generation + 1;
  const double ps_norm = next.path_sigma.norm();
  const double correction = std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * next.generation));
  const bool hsig = ps_norm / correction / chi_n < 1.4 + 2.0 / (nd + 1.0);
  next.path_c = (1.0 - cc) * state.path_c;
  if (hsig) next.path_c += std::sqrt(cc * (2.0 - cc) * mueff) * y_w;

  const double stall = hsig ? 0.0 : cc * (2.0 - cc);
  next.cov = (1.0 - c1 - cmu) * state.cov + c1 * (next.path_c * next.path_c.transpose() + stall * state.cov) +
             cmu * steps * weights.asDiagonal() * steps.transpose();

  next.sigma = std::clamp(state.sigma * std::exp((cs / damps) * (ps_norm / chi_n - 1.0)), kMinSigma, kMaxSigma);
  refresh_eigensystem(next);
  return next;
}

}  // namespace odsearch
