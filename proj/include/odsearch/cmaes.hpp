#pragma once

#include <span>

#include <Eigen/Dense>

#include "odsearch/rng.hpp"

namespace odsearch {

/// (mu/mu_w, lambda)-CMA-ES state on the unit cube.
struct CmaesState {
  Eigen::VectorXd mean;
  double sigma = 0.3;
  Eigen::MatrixXd cov;
  Eigen::VectorXd path_sigma;
  Eigen::VectorXd path_c;
  int generation = 0;

  // Eigendecomposition of cov (cov = B diag(D^2) B^T), refreshed by every update.
  Eigen::MatrixXd basis;
  Eigen::VectorXd scales;

  Eigen::Index dimension() const { return mean.size(); }
};

inline constexpr double kMinSigma = 1e-8;
inline constexpr double kMaxSigma = 1e2;

/// mean = 0.5 in every coordinate, C = I.
CmaesState cmaes_initial(Eigen::Index dimension, double sigma = 0.3);

/// Default population size 4 + floor(3 ln d).
std::size_t cmaes_population(Eigen::Index dimension);

/// m + sigma * C^(1/2) z with z standard normal, before clamping.
Eigen::VectorXd cmaes_sample_unclamped(const CmaesState& state, Rng& rng);
/// The same draw clamped to [0, 1]^d.
Eigen::VectorXd cmaes_sample(const CmaesState& state, Rng& rng);

struct RankedCode {
  Eigen::VectorXd code;
  double loss = 0.0;
};

/// One generation of the standard update: log-rank weighted recombination of
/// the best floor(n/2) samples, cumulative step-size adaptation, rank-one and
/// rank-mu covariance updates. Samples are ranked by loss (stable). Throws
/// kTooFewSamples for fewer than two samples.
CmaesState cmaes_update(const CmaesState& state, std::span<const RankedCode> samples);

}  // namespace odsearch
