#pragma once

#include <vector>

#include <Eigen/Dense>

#include "odsearch/detectors.hpp"

namespace odsearch::detail {

/// Validates 1 <= n_fit <= rows and a nonempty matrix; throws kTooFewRows.
void check_fit_rows(const Eigen::MatrixXd& X, Eigen::Index n_fit);

/// Euclidean distances between every row of X and each of the first n_fit
/// rows, computed from explicit differences.
Eigen::MatrixXd distances_to_fit(const Eigen::MatrixXd& X, Eigen::Index n_fit);

struct Neighbour {
  Eigen::Index index;
  double distance;
};

/// The k nearest fitted rows of row i (self excluded when i < n_fit), sorted
/// by distance then index.
std::vector<Neighbour> nearest(const Eigen::MatrixXd& dist, Eigen::Index i, Eigen::Index n_fit, int k);

void require_finite(const ScoreVector& scores, std::string_view detector);

}  // namespace odsearch::detail
