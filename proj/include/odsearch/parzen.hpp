#pragma once

#include <span>
#include <vector>

namespace odsearch {

/// Mixture of Gaussian kernels truncated to [low, high] and renormalised
/// there, one kernel per observation. Without observations it is the uniform
/// density on the range.
class KernelDensity {
 public:
  /// Bandwidth of each kernel = max(width / min(100, m), distance to the
  /// nearest other observation). Observations outside the range are ignored;
  /// throws kEmptyObservations when none remain.
  static KernelDensity fit(std::span<const double> observations, double low, double high);
  static KernelDensity uniform(double low, double high);

  double pdf(double x) const;

  double low() const { return low_; }
  double high() const { return high_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }

 private:
  KernelDensity(double low, double high) : low_(low), high_(high) {}

  double low_;
  double high_;
  std::vector<double> centers_;
  std::vector<double> bandwidths_;
  std::vector<double> mass_;  // probability each kernel puts inside the range
};

/// Independent per-coordinate densities on the unit cube.
class ProductDensity {
 public:
  ProductDensity() = default;
  explicit ProductDensity(std::vector<KernelDensity> dims) : dims_(std::move(dims)) {}

  /// Fits one KernelDensity per coordinate on [0, 1]; uniform when `codes`
  /// is empty.
  static ProductDensity fit(const std::vector<std::vector<double>>& codes, std::size_t dim);

  double pdf(std::span<const double> x) const;
  std::size_t dimension() const { return dims_.size(); }

 private:
  std::vector<KernelDensity> dims_;
};

/// l(x) / max(g(x), 1e-12); larger is a better candidate.
double ei_rank(std::span<const double> code, const ProductDensity& good, const ProductDensity& bad);

}  // namespace odsearch
