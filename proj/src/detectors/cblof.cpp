#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>
#include <numeric>

#include "common.hpp"
#include "odsearch/error.hpp"
#include "odsearch/rng.hpp"

namespace odsearch {
namespace {

constexpr int kRestarts = 10;
constexpr int kMaxIterations = 100;

struct Clustering {
  Eigen::MatrixXd centroids;
  std::vector<int> labels;
  std::vector<std::size_t> sizes;
  double inertia = std::numeric_limits<double>::infinity();
};

double squared_distance(const Eigen::MatrixXd& X, Eigen::Index row, const Eigen::MatrixXd& C, Eigen::Index c) {
  return (X.row(row) - C.row(c)).squaredNorm();
}

int nearest_centroid(const Eigen::MatrixXd& X, Eigen::Index row, const Eigen::MatrixXd& C) {
  int best = 0;
  double best_d = squared_distance(X, row, C, 0);
  for (Eigen::Index c = 1; c < C.rows(); ++c) {
    const double d = squared_distance(X, row, C, c);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

// k-means++ seeding followed by Lloyd iterations.
Clustering kmeans_once(const Eigen::MatrixXd& X, Eigen::Index n, int k, Rng& rng) {
  Clustering out;
  out.centroids.resize(k, X.cols());
  out.centroids.row(0) = X.row(static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n))));
  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) d2[static_cast<std::size_t>(i)] = squared_distance(X, i, out.centroids, 0);
  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    Eigen::Index pick = n - 1;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (d2[static_cast<std::size_t>(i)] <= 0.0) continue;
        pick = i;
        target -= d2[static_cast<std::size_t>(i)];
        if (target < 0.0) break;
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
    }
    out.centroids.row(c) = X.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], squared_distance(X, i, out.centroids, c));
    }
  }

  out.labels.assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = nearest_centroid(X, i, out.centroids);
      if (c != out.labels[static_cast<std::size_t>(i)]) {
        out.labels[static_cast<std::size_t>(i)] = c;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, X.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int c = out.labels[static_cast<std::size_t>(i)];
      sums.row(c) += X.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        out.centroids.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      }
    }
  }

  out.sizes.assign(static_cast<std::size_t>(k), 0);
  out.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int c = out.labels[static_cast<std::size_t>(i)];
    ++out.sizes[static_cast<std::size_t>(c)];
    out.inertia += squared_distance(X, i, out.centroids, c);
  }
  return out;
}

bool has_empty_cluster(const Clustering& c) {
  return std::any_of(c.sizes.begin(), c.sizes.end(), [](std::size_t s) { return s == 0; });
}

// Number of leading clusters (by descending size) that count as large. A
// boundary satisfies the alpha rule when the clusters before it hold at least
// alpha * n points, and the beta rule when the size ratio across it is at
// least beta. The first boundary satisfying both wins, then the first
// satisfying the beta rule alone; with no size gap at all every cluster is
// large.
std::size_t large_cluster_count(const std::vector<std::size_t>& sorted_sizes, std::size_t n, double alpha,
                                double beta) {
  std::optional<std::size_t> beta_only;
  std::size_t cumulative = 0;
  for (std::size_t b = 1; b < sorted_sizes.size(); ++b) {
    cumulative += sorted_sizes[b - 1];
    const bool alpha_ok = static_cast<double>(cumulative) >= alpha * static_cast<double>(n);
    const bool beta_ok =
        static_cast<double>(sorted_sizes[b - 1]) >= beta * static_cast<double>(sorted_sizes[b]);
    if (alpha_ok && beta_ok) return b;
    if (beta_ok && !beta_only) beta_only = b;
  }
  return beta_only.value_or(sorted_sizes.size());
}

}  // namespace

ScoreVector cblof_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_clusters, double alpha,
                         double beta, std::uint64_t seed) {
  detail::check_fit_rows(X, n_fit);
  if (n_clusters < 2 || n_clusters > n_fit) {
    throw Error(ErrorCode::kTooFewRows, "CBLOF n_clusters " + std::to_string(n_clusters) + " with " +
                                            std::to_string(n_fit) + " fitted rows");
  }
  if (!(alpha >= 0.5 && alpha < 1.0) || !(beta > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "CBLOF needs 0.5 <= alpha < 1 and beta > 1");
  }

  Rng rng(seed);
  Clustering best;
  for (int k = n_clusters; k >= 2 && best.sizes.empty(); --k) {
    for (int r = 0; r < kRestarts; ++r) {
      Clustering c = kmeans_once(X, n_fit, k, rng);
      if (!has_empty_cluster(c) && c.inertia < best.inertia) best = std::move(c);
    }
  }
  if (best.sizes.empty()) throw Error(ErrorCode::kClusteringFailed, "every restart left an empty cluster");

  const auto k = static_cast<std::size_t>(best.centroids.rows());
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return best.sizes[a] > best.sizes[b]; });
  std::vector<std::size_t> sorted_sizes(k);
  for (std::size_t i = 0; i < k; ++i) sorted_sizes[i] = best.sizes[order[i]];
  const std::size_t n_large =
      large_cluster_count(sorted_sizes, static_cast<std::size_t>(n_fit), alpha, beta);
  std::vector<bool> is_large(k, false);
  for (std::size_t i = 0; i < n_large; ++i) is_large[order[i]] = true;

  ScoreVector scores(static_cast<std::size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const int own = i < n_fit ? best.labels[static_cast<std::size_t>(i)] : nearest_centroid(X, i, best.centroids);
    double d2;
    if (is_large[static_cast<std::size_t>(own)]) {
      d2 = squared_distance(X, i, best.centroids, own);
    } else {
      d2 = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        if (is_large[c]) d2 = std::min(d2, squared_distance(X, i, best.centroids, static_cast<Eigen::Index>(c)));
      }
    }
    scores[static_cast<std::size_t>(i)] = std::sqrt(d2);
  }
  return scores;
}

ScoreVector cblof_scores(const Eigen::MatrixXd& X, int n_clusters, double alpha, double beta,
                         std::uint64_t seed) {
  return cblof_scores(X, X.rows(), n_clusters, alpha, beta, seed);
}

}  // namespace odsearch
