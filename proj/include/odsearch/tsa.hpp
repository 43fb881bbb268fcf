#pragma once

#include <optional>
#include <span>
#include <vector>

namespace odsearch {

/// Additive split value[i] = level + trend[i] + seasonal[i] + residual[i].
struct Decomposition {
  double level = 0.0;
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> residual;
  int period = 0;
};

/// level = mean; trend = centred moving average of width `period` (2 x MA for
/// even periods) minus level, ends filled with the nearest interior value;
/// seasonal = per-phase mean of the detrended series, recentred to zero mean;
/// residual = whatever remains. Throws kInvalidPeriod (period < 2) or
/// kSeriesTooShort (n < 2 * period).
Decomposition decompose(std::span<const double> values, int period);

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

inline constexpr std::size_t kDensityGridPoints = 512;

/// 0.9 * min(sd, IQR / 1.34) * n^(-1/5); when one spread measure is zero the
/// other is used. Floored at 1e-6.
double silverman_bandwidth(std::span<const double> values);

/// Gaussian kernel estimate at x.
double kde_at(std::span<const double> values, double bandwidth, double x);

/// Gaussian KDE on a 512-point uniform grid over [min - 4h, max + 4h].
/// Throws kInvalidArgument for an empty input or a non-positive bandwidth.
DensityCurve kde(std::span<const double> values, std::optional<double> bandwidth = std::nullopt);

}  // namespace odsearch
