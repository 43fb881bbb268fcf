#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "odsearch/dataset.hpp"

namespace odsearch {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
};

/// Point-wise counts; throws kLengthMismatch.
ConfusionCounts confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> labels);

/// 2tp / (2tp + fp + fn), 0 when the denominator is 0.
double f1_score(const ConfusionCounts& c);

/// 2 / (1 + e^(5y)) - 1, evaluated as -tanh(2.5 y).
double scaled_sigmoid(double y);

struct NabProfile {
  std::string name;
  double a_tp = 1.0;
  double a_fp = 0.11;
  double a_fn = 1.0;
};

/// standard, reward_low_fp, reward_low_fn.
const std::array<NabProfile, 3>& nab_profiles();
std::optional<NabProfile> find_nab_profile(std::string_view name);

/// Unnormalised windowed score. The earliest detection inside a window earns
/// a_tp * sigma(y), y running from -1 at the window's first point to 0 at its
/// last; later detections in the same window count for nothing. A detection
/// outside every window adds a_fp * sigma(y) with y = (points past the
/// preceding window's end) / (that window's point count), or costs a_fp when
/// no window precedes it. Each undetected window costs a_fn. Windows holding
/// no data point are ignored.
double nab_raw_score(const TimeSeriesDataset& ds, std::span<const std::uint8_t> detections,
                     const NabProfile& profile);

/// 100 * (raw - raw_null) / (raw_perfect - raw_null) where the null detector
/// flags nothing and the perfect one flags each window's first point. Throws
/// kNoWindows when no window contains a data point, kLengthMismatch when
/// detections and dataset lengths differ.
double nab_score(const TimeSeriesDataset& ds, std::span<const std::uint8_t> detections, const NabProfile& profile);

/// Detections of the perfect detector used for normalisation.
std::vector<std::uint8_t> perfect_detections(const TimeSeriesDataset& ds);

}  // namespace odsearch
