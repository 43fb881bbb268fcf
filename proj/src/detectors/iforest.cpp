#include <cmath>
#include <numeric>

#include "common.hpp"
#include "odsearch/error.hpp"
#include "odsearch/rng.hpp"

namespace odsearch {
namespace {

struct Node {
  Eigen::Index feature = -1;  // -1 marks a leaf
  double split = 0.0;
  int left = -1;
  int right = -1;
  std::size_t size = 0;  // points reaching a leaf
};

class IsolationTree {
 public:
  IsolationTree(const Eigen::MatrixXd& X, std::vector<Eigen::Index> sample, int height_limit, Rng& rng) {
    build(X, sample, 0, height_limit, rng);
  }

  double path_length(const Eigen::MatrixXd& X, Eigen::Index row) const {
    int node = 0;
    double depth = 0.0;
    while (nodes_[static_cast<std::size_t>(node)].feature >= 0) {
      const auto& n = nodes_[static_cast<std::size_t>(node)];
      node = X(row, n.feature) < n.split ? n.left : n.right;
      depth += 1.0;
    }
    return depth + average_path_length(nodes_[static_cast<std::size_t>(node)].size);
  }

 private:
  int build(const Eigen::MatrixXd& X, std::vector<Eigen::Index>& idx, int depth, int limit, Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    nodes_.back().size = idx.size();
    if (depth >= limit || idx.size() <= 1) return id;

    std::vector<Eigen::Index> splittable;
    std::vector<std::pair<double, double>> ranges;
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      double lo = X(idx.front(), c), hi = lo;
      for (const auto r : idx) {
        lo = std::min(lo, X(r, c));
        hi = std::max(hi, X(r, c));
      }
      if (hi > lo) {
        splittable.push_back(c);
        ranges.emplace_back(lo, hi);
      }
    }
    if (splittable.empty()) return id;

    const auto pick = static_cast<std::size_t>(rng.index(splittable.size()));
    const Eigen::Index feature = splittable[pick];
    const auto [lo, hi] = ranges[pick];
    double split = rng.uniform(lo, hi);
    if (split <= lo) split = std::nextafter(lo, hi);

    std::vector<Eigen::Index> left, right;
    for (const auto r : idx) (X(r, feature) < split ? left : right).push_back(r);
    idx.clear();
    idx.shrink_to_fit();

    const int l = build(X, left, depth + 1, limit, rng);
    const int r = build(X, right, depth + 1, limit, rng);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = feature;
    node.split = split;
    node.left = l;
    node.right = r;
    return id;
  }

  std::vector<Node> nodes_;
};

}  // namespace

double average_path_length(std::size_t n) {
  if (n <= 1) return 0.0;
  double harmonic = 0.0;
  for (std::size_t i = 1; i < n; ++i) harmonic += 1.0 / static_cast<double>(i);
  const double nd = static_cast<double>(n);
  return 2.0 * harmonic - 2.0 * (nd - 1.0) / nd;
}

ScoreVector iforest_scores(const Eigen::MatrixXd& X, Eigen::Index n_fit, int n_trees, int subsample,
                           std::uint64_t seed) {
  detail::check_fit_rows(X, n_fit);
  if (n_trees < 1) throw Error(ErrorCode::kInvalidArgument, "IFOREST needs at least one tree");
  if (subsample < 2 || subsample > n_fit) {
    throw Error(ErrorCode::kTooFewRows, "IFOREST subsample " + std::to_string(subsample) + " with " +
                                            std::to_string(n_fit) + " fitted rows");
  }
  const int height_limit = static_cast<int>(std::ceil(std::log2(static_cast<double>(subsample))));
  Rng rng(seed);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n_fit));
  std::iota(pool.begin(), pool.end(), Eigen::Index{0});

  std::vector<double> total(static_cast<std::size_t>(X.rows()), 0.0);
  for (int t = 0; t < n_trees; ++t) {
    // Partial Fisher-Yates: the first `subsample` entries form the sample.
    for (std::size_t i = 0; i < static_cast<std::size_t>(subsample); ++i) {
      const auto j = i + static_cast<std::size_t>(rng.index(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    std::vector<Eigen::Index> sample(pool.begin(), pool.begin() + subsample);
    const IsolationTree tree(X, std::move(sample), height_limit, rng);
    for (Eigen::Index i = 0; i < X.rows(); ++i) total[static_cast<std::size_t>(i)] += tree.path_length(X, i);
  }

  const double norm = average_path_length(static_cast<std::size_t>(subsample));
  ScoreVector scores(total.size());
  for (std::size_t i = 0; i < total.size(); ++i) {
    scores[i] = std::exp2(-(total[i] / n_trees) / norm);
  }
  return scores;
}

ScoreVector iforest_scores(const Eigen::MatrixXd& X, int n_trees, int subsample, std::uint64_t seed) {
  return iforest_scores(X, X.rows(), n_trees, subsample, seed);
}

}  // namespace odsearch
