#include "odsearch/tsa.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

constexpr double kGridHalfWidth = 4.0;  // bandwidths past the data on each side

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

Decomposition decompose(std::span<const double> values, int period) {
  if (period < 2) throw Error(ErrorCode::kInvalidPeriod, "period must be at least 2");
  const std::size_t n = values.size();
  const auto p = static_cast<std::size_t>(period);
  if (n < 2 * p) {
    throw Error(ErrorCode::kSeriesTooShort, std::to_string(n) + " points for period " + std::to_string(period));
  }

  Decomposition out;
  out.period = period;
  out.level = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);

  const std::size_t half = p / 2;
  std::vector<double> trend(n, 0.0);
  for (std::size_t i = half; i + half < n; ++i) {
    double s = 0.0;
    if (p % 2 == 1) {
      for (std::size_t j = i - half; j <= i + half; ++j) s += values[j];
      s /= static_cast<double>(p);
    } else {
      s = 0.5 * (values[i - half] + values[i + half]);
      for (std::size_t j = i - half + 1; j < i + half; ++j) s += values[j];
      s /= static_cast<double>(p);
    }
    trend[i] = s - out.level;
  }
  for (std::size_t i = 0; i < half; ++i) trend[i] = trend[half];
  for (std::size_t i = n - half; i < n; ++i) trend[i] = trend[n - half - 1];

  std::vector<double> phase_sum(p, 0.0);
  std::vector<std::size_t> phase_count(p, 0);
  for (std::size_t i = 0; i < n; ++i) {
    phase_sum[i % p] += values[i] - out.level - trend[i];
    ++phase_count[i % p];
  }
  std::vector<double> pattern(p);
  for (std::size_t k = 0; k < p; ++k) pattern[k] = phase_sum[k] / static_cast<double>(phase_count[k]);
  const double centre = std::accumulate(pattern.begin(), pattern.end(), 0.0) / static_cast<double>(p);
  for (auto& v : pattern) v -= centre;

  out.trend = std::move(trend);
  out.seasonal.resize(n);
  out.residual.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.seasonal[i] = pattern[i % p];
    out.residual[i] = values[i] - out.level - out.trend[i] - out.seasonal[i];
  }
  return out;
}

double silverman_bandwidth(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "bandwidth of an empty sample");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double var = 0.0;
  for (const double v : values) var += (v - mean) * (v - mean);
  const double sd = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = (quantile(sorted, 0.75) - quantile(sorted, 0.25)) / 1.34;

  double spread = std::min(sd, iqr);
  if (!(spread > 0.0)) spread = std::max(sd, iqr);
  return std::max(0.9 * spread * std::pow(static_cast<double>(n), -0.2), 1e-6);
}

double kde_at(std::span<const double> values, double bandwidth, double x) {
  double sum = 0.0;
  for (const double v : values) {
    const double z = (x - v) / bandwidth;
    sum += std::exp(-0.5 * z * z);
  }
  return sum / (static_cast<double>(values.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
}

DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "density of an empty sample");
  if (bandwidth && !(*bandwidth > 0.0)) throw Error(ErrorCode::kInvalidArgument, "bandwidth must be positive");
  DensityCurve out;
  out.bandwidth = bandwidth.value_or(silverman_bandwidth(values));
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it - kGridHalfWidth * out.bandwidth;
  const double hi = *hi_it + kGridHalfWidth * out.bandwidth;
  out.grid.resize(kDensityGridPoints);
  out.density.resize(kDensityGridPoints);
  for (std::size_t i = 0; i < kDensityGridPoints; ++i) {
    out.grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(kDensityGridPoints - 1);
    out.density[i] = kde_at(values, out.bandwidth, out.grid[i]);
  }
  return out;
}

}  // namespace odsearch
