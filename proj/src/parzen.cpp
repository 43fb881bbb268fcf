#include "odsearch/parzen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

constexpr double kDensityFloor = 1e-12;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

KernelDensity KernelDensity::fit(std::span<const double> observations, double low, double high) {
  if (!(high > low)) throw Error(ErrorCode::kInvalidArgument, "density range must have low < high");
  KernelDensity kd(low, high);
  for (const double x : observations) {
    if (x >= low && x <= high) kd.centers_.push_back(x);
  }
  if (kd.centers_.empty()) throw Error(ErrorCode::kEmptyObservations, "no observation inside the range");

  const std::size_t m = kd.centers_.size();
  const double floor_bw = (high - low) / static_cast<double>(std::min<std::size_t>(100, m));
  kd.bandwidths_.resize(m);
  kd.mass_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    double nearest = 0.0;
    if (m > 1) {
      nearest = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < m; ++j) {
        if (j != i) nearest = std::min(nearest, std::abs(kd.centers_[i] - kd.centers_[j]));
      }
    }
    const double bw = std::max(floor_bw, nearest);
    kd.bandwidths_[i] = bw;
    kd.mass_[i] = normal_cdf((high - kd.centers_[i]) / bw) - normal_cdf((low - kd.centers_[i]) / bw);
  }
  return kd;
}

KernelDensity KernelDensity::uniform(double low, double high) {
  if (!(high > low)) throw Error(ErrorCode::kInvalidArgument, "density range must have low < high");
  return KernelDensity(low, high);
}

double KernelDensity::pdf(double x) const {
  if (x < low_ || x > high_) return 0.0;
  if (centers_.empty()) return 1.0 / (high_ - low_);
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double z = (x - centers_[i]) / bandwidths_[i];
    sum += std::exp(-0.5 * z * z) / (bandwidths_[i] * std::sqrt(2.0 * std::numbers::pi) * mass_[i]);
  }
  return sum / static_cast<double>(centers_.size());
}

ProductDensity ProductDensity::fit(const std::vector<std::vector<double>>& codes, std::size_t dim) {
  std::vector<KernelDensity> dims;
  dims.reserve(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    if (codes.empty()) {
      dims.push_back(KernelDensity::uniform(0.0, 1.0));
      continue;
    }
    std::vector<double> column;
    column.reserve(codes.size());
    for (const auto& c : codes) {
      if (c.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "code length differs from density dimension");
      column.push_back(std::clamp(c[d], 0.0, 1.0));
    }
    dims.push_back(KernelDensity::fit(column, 0.0, 1.0));
  }
  return ProductDensity(std::move(dims));
}

double ProductDensity::pdf(std::span<const double> x) const {
  if (x.size() != dims_.size()) throw Error(ErrorCode::kDimensionMismatch, "point dimension differs from density");
  double p = 1.0;
  for (std::size_t d = 0; d < dims_.size(); ++d) p *= dims_[d].pdf(x[d]);
  return p;
}

double ei_rank(std::span<const double> code, const ProductDensity& good, const ProductDensity& bad) {
  return good.pdf(code) / std::max(bad.pdf(code), kDensityFloor);
}

}  // namespace odsearch
