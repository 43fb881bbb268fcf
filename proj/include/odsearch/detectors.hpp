#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "odsearch/dataset.hpp"

namespace odsearch {

enum class Algorithm { kKnn, kLof, kHbos, kIforest, kPca, kCblof, kRobustCov, kAutoencoder };

inline constexpr std::array<Algorithm, 8> kAllAlgorithms = {
    Algorithm::kKnn,  Algorithm::kLof,   Algorithm::kHbos,      Algorithm::kIforest,
    Algorithm::kPca,  Algorithm::kCblof, Algorithm::kRobustCov, Algorithm::kAutoencoder};

/// "KNN", "LOF", "HBOS", "IFOREST", "PCA", "CBLOF", "ROBUSTCOV", "AUTOENCODER".
std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// One score per point; larger means more anomalous.
using ScoreVector = std::vector<double>;

struct DetectorConfig {
  Algorithm algorithm = Algorithm::kKnn;
  std::map<std::string, std::int64_t> discrete;
  std::map<std::string, double> continuous;
  std::uint64_t seed = 0;
};

struct BinaryPrediction {
  std::vector<std::uint8_t> bits;
  double threshold = 0.0;
};

enum class KnnAggregate { kLargest = 0, kMean = 1, kMedian = 2 };

// Every detector below fits on the leading `n_fit` rows of X and scores all
// rows of X, one score per row. Rows with index < n_fit are scored as members
// of the fitted set (neighbour searches exclude the row itself). The overloads
// without n_fit fit and score the whole matrix.

ScoreVector knn_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int k, KnnAggregate aggregate);
ScoreVector knn_scores(const Eigen::MatrixXd& X, int k, KnnAggregate aggregate);

/// Local outlier factor. A point whose mean reachability distance is zero
/// (at least k exact duplicates) scores 1.0.
ScoreVector lof_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int k);
ScoreVector lof_scores(const Eigen::MatrixXd& X, int k);

/// Per-column equal-width histograms over the fitted [min, max]. Each bin's
/// count gets `alpha` added and is normalised by the largest smoothed count;
/// a point scores the sum over columns of -log(normalised height). Values
/// outside the fitted range land in an empty bin. Constant columns add 0.
ScoreVector hbos_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_bins, double alpha);
ScoreVector hbos_scores(const Eigen::MatrixXd& X, int n_bins, double alpha);

/// Average unsuccessful-search path length of a binary search tree over n
/// points, c(n) = 2 H(n-1) - 2 (n-1) / n with exact harmonic numbers; c(1) = 0.
double average_path_length(std::size_t n);

/// Isolation forest, score = 2^(-E[h(x)] / c(subsample)).
ScoreVector iforest_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_trees, int subsample,
                           std::uint64_t seed);
ScoreVector iforest_scores(const Eigen::MatrixXd& X, int n_trees, int subsample, std::uint64_t seed);

/// Squared reconstruction error after projecting onto the leading principal
/// components that explain at least `variance_fraction` of the variance.
ScoreVector pca_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, double variance_fraction);
ScoreVector pca_scores(const Eigen::MatrixXd& X, double variance_fraction);

/// Cluster-based local outlier factor over seeded k-means (10 restarts, at
/// most 100 Lloyd iterations each).
ScoreVector cblof_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_clusters, double alpha,
                         double beta, std::uint64_t seed);
ScoreVector cblof_scores(const Eigen::MatrixXd& X, int n_clusters, double alpha, double beta,
                         std::uint64_t seed);

/// Iteratively trimmed mean/covariance; score = squared Mahalanobis distance.
ScoreVector robustcov_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, double support_fraction);
ScoreVector robustcov_scores(const Eigen::MatrixXd& X, double support_fraction);

/// One-hidden-layer autoencoder (tanh hidden, linear output) trained by
/// full-batch gradient descent on the mean squared reconstruction error.
class Autoencoder {
 public:
  /// Weights uniform on (-0.1, 0.1), biases zero.
  Autoencoder(int input_width, int hidden, std::uint64_t seed);

  int input_width() const { return input_; }
  int hidden() const { return hidden_; }

  /// Flattened parameters: W1 (hidden x input, column-major), b1, W2
  /// (input x hidden, column-major), b2.
  Eigen::VectorXd parameters() const;
  void set_parameters(const Eigen::VectorXd& theta);

  /// Mean over all entries of the squared reconstruction error.
  double loss(const Eigen::MatrixXd& X) const;
  /// Analytic gradient of loss() in parameters() layout.
  Eigen::VectorXd gradient(const Eigen::MatrixXd& X) const;

  /// Runs `epochs` gradient steps and returns the final loss. Throws
  /// kNumericOverflow when the loss stops being finite.
  double train(const Eigen::MatrixXd& X, double learning_rate, int epochs);

  Eigen::MatrixXd reconstruct(const Eigen::MatrixXd& X) const;
  /// Per-row squared reconstruction error.
  ScoreVector row_errors(const Eigen::MatrixXd& X) const;

 private:
  int input_;
  int hidden_;
  Eigen::MatrixXd w1_;
  Eigen::VectorXd b1_;
  Eigen::MatrixXd w2_;
  Eigen::VectorXd b2_;
};

ScoreVector autoencoder_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int hidden, double lr,
                               int epochs, std::uint64_t seed);
ScoreVector autoencoder_scores(const Eigen::MatrixXd& X, int hidden, double lr, int epochs,
                               std::uint64_t seed);

/// max(1, ceil(c * n)), robust to representation error in c * n.
std::size_t flagged_count(double contamination, std::size_t n);

/// Flags exactly flagged_count(c, n) highest scores; ties go to the lower
/// index. Requires 0 < c < 0.5.
BinaryPrediction threshold_by_contamination(std::span<const double> scores, double contamination);

/// Standardises columns with the fitted rows' statistics, dispatches on
/// cfg.algorithm and returns one finite score per row of X. Parameters the
/// data cannot support are clamped: IFOREST subsample to n_fit and
/// AUTOENCODER hidden to the input width.
ScoreVector fit_score(const DetectorConfig& cfg, const Eigen::MatrixXd& X, Eigen::Index n_fit);

/// As above on an embedded series, with row scores attributed back to one
/// score per source point.
ScoreVector fit_score(const DetectorConfig& cfg, const FeatureMatrix& X, Eigen::Index n_fit_rows);

}  // namespace odsearch
