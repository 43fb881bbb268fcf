#include <algorithm>
#include <cmath>
#include <numeric>

#include "odsearch/detectors.hpp"
#include "odsearch/error.hpp"

namespace odsearch {

std::size_t flagged_count(double contamination, std::size_t n) {
  const double raw = std::ceil(contamination * static_cast<double>(n) - 1e-9);
  return std::max<std::size_t>(1, std::min(n, static_cast<std::size_t>(std::max(raw, 0.0))));
}

BinaryPrediction threshold_by_contamination(std::span<const double> scores, double contamination) {
  if (!(contamination > 0.0 && contamination < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "contamination outside (0, 0.5)");
  }
  BinaryPrediction out;
  out.bits.assign(scores.size(), 0);
  if (scores.empty()) return out;

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  const std::size_t m = flagged_count(contamination, scores.size());
  for (std::size_t i = 0; i < m; ++i) out.bits[order[i]] = 1;
  out.threshold = scores[order[m - 1]];
  return out;
}

}  // namespace odsearch
