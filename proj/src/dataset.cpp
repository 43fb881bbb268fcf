#include "odsearch/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "odsearch/error.hpp"

namespace odsearch {

TimeSeriesDataset build_dataset(std::string name, std::vector<EpochMs> timestamps,
                                std::vector<double> values, std::vector<AnomalyWindow> windows) {
  if (timestamps.size() != values.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(timestamps.size()) + " timestamps vs " +
                                                std::to_string(values.size()) + " values");
  }
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] <= timestamps[i - 1]) {
      throw Error(ErrorCode::kNonMonotonicTimestamps, "at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kNonFiniteValue, "at index " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < windows.size(); ++i) {
    const auto& w = windows[i];
    if (w.start > w.end) {
      throw Error(ErrorCode::kWindowOutOfRange, "window " + std::to_string(i) + " has start > end");
    }
    if (timestamps.empty() || w.start < timestamps.front() || w.end > timestamps.back()) {
      throw Error(ErrorCode::kWindowOutOfRange,
                  "window " + std::to_string(i) + " lies outside the series");
    }
    if (i > 0 && w.start <= windows[i - 1].end) {
      throw Error(ErrorCode::kWindowOutOfRange,
                  "window " + std::to_string(i) + " overlaps or precedes its predecessor");
    }
  }

  TimeSeriesDataset ds;
  ds.name_ = std::move(name);
  ds.timestamps_ = std::move(timestamps);
  ds.values_ = std::move(values);
  ds.windows_ = std::move(windows);
  return ds;
}

TimeSeriesDataset TimeSeriesDataset::slice(std::size_t begin, std::size_t end) const {
  end = std::min(end, size());
  begin = std::min(begin, end);
  std::vector<EpochMs> ts(timestamps_.begin() + begin, timestamps_.begin() + end);
  std::vector<double> vs(values_.begin() + begin, values_.begin() + end);
  std::vector<AnomalyWindow> clipped;
  if (!ts.empty()) {
    const EpochMs lo = ts.front();
    const EpochMs hi = ts.back();
    for (const auto& w : windows_) {
      if (w.end < lo || w.start > hi) continue;
      clipped.push_back({std::max(w.start, lo), std::min(w.end, hi)});
    }
  }
  return build_dataset(name_, std::move(ts), std::move(vs), std::move(clipped));
}

TimeSeriesDataset TimeSeriesDataset::slice_time(EpochMs t_start, EpochMs t_end) const {
  const auto first = std::lower_bound(timestamps_.begin(), timestamps_.end(), t_start);
  const auto last = std::upper_bound(timestamps_.begin(), timestamps_.end(), t_end);
  const auto begin = static_cast<std::size_t>(first - timestamps_.begin());
  const auto end = static_cast<std::size_t>(std::max(first, last) - timestamps_.begin());
  return slice(begin, end);
}

LabelVector labels_from_windows(const TimeSeriesDataset& ds) {
  LabelVector bits(ds.size(), 0);
  const auto ts = ds.timestamps();
  for (const auto& w : ds.windows()) {
    auto it = std::lower_bound(ts.begin(), ts.end(), w.start);
    for (; it != ts.end() && *it <= w.end; ++it) {
      bits[static_cast<std::size_t>(it - ts.begin())] = 1;
    }
  }
  return bits;
}

DataSplit chronological_split(const TimeSeriesDataset& ds, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratio must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  if (n < 4) {
    throw Error(ErrorCode::kDatasetTooSmall, "need at least 4 points, have " + std::to_string(n));
  }
  const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  if (n_train == 0 || n_train == n) {
    throw Error(ErrorCode::kDatasetTooSmall, "ratio leaves an empty train or validation segment");
  }
  return {ds.slice(0, n_train), ds.slice(n_train, n), ratio};
}

FeatureMatrix window_embed(std::span<const double> values, std::size_t width) {
  if (width == 0 || width > values.size()) {
    throw Error(ErrorCode::kWindowTooLarge, "width " + std::to_string(width) + " for " +
                                                std::to_string(values.size()) + " values");
  }
  const std::size_t n_rows = values.size() - width + 1;
  FeatureMatrix fm;
  fm.width = width;
  fm.rows.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      fm.rows(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i + j];
    }
  }
  return fm;
}

std::vector<double> attribute_row_scores(std::span<const double> row_scores, std::size_t width) {
  if (row_scores.empty()) return {};
  std::vector<double> out(row_scores.size() + width - 1);
  for (std::size_t j = 0; j + 1 < width; ++j) out[j] = row_scores.front();
  for (std::size_t i = 0; i < row_scores.size(); ++i) out[i + width - 1] = row_scores[i];
  return out;
}

}  // namespace odsearch
