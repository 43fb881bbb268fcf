#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace odsearch {

using EpochMs = std::int64_t;

/// Labeled anomaly interval, inclusive on both ends.
struct AnomalyWindow {
  EpochMs start = 0;
  EpochMs end = 0;

  bool contains(EpochMs t) const { return start <= t && t <= end; }
  friend bool operator==(const AnomalyWindow&, const AnomalyWindow&) = default;
};

/// One bit per data point; 1 means the point lies inside an anomaly window.
using LabelVector = std::vector<std::uint8_t>;

/// Validated univariate series. Immutable once built; construct through
/// build_dataset() so the invariants (strictly increasing timestamps, finite
/// values, sorted disjoint in-range windows) always hold.
class TimeSeriesDataset {
 public:
  TimeSeriesDataset() = default;

  const std::string& name() const { return name_; }
  std::span<const EpochMs> timestamps() const { return timestamps_; }
  std::span<const double> values() const { return values_; }
  std::span<const AnomalyWindow> windows() const { return windows_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  /// Contiguous sub-range [begin, end) with windows clipped to the slice's
  /// time span. Windows not overlapping the slice are dropped.
  TimeSeriesDataset slice(std::size_t begin, std::size_t end) const;

  /// Points with t_start <= t <= t_end.
  TimeSeriesDataset slice_time(EpochMs t_start, EpochMs t_end) const;

 private:
  friend TimeSeriesDataset build_dataset(std::string, std::vector<EpochMs>, std::vector<double>,
                                         std::vector<AnomalyWindow>);
  std::string name_;
  std::vector<EpochMs> timestamps_;
  std::vector<double> values_;
  std::vector<AnomalyWindow> windows_;
};

/// Throws Error with kLengthMismatch, kNonMonotonicTimestamps,
/// kNonFiniteValue or kWindowOutOfRange. An empty series is accepted (it is
/// what a query over an empty range returns) but may not carry windows.
TimeSeriesDataset build_dataset(std::string name, std::vector<EpochMs> timestamps,
                                std::vector<double> values, std::vector<AnomalyWindow> windows);

LabelVector labels_from_windows(const TimeSeriesDataset& ds);

struct DataSplit {
  TimeSeriesDataset train;
  TimeSeriesDataset val;
  double ratio = 0.0;
};

/// train = first floor(ratio * n) points. Requires n >= 4 and 0 < ratio < 1,
/// and both halves nonempty.
DataSplit chronological_split(const TimeSeriesDataset& ds, double ratio);

/// Sliding-window embedding: row i holds values[i .. i + width).
struct FeatureMatrix {
  Eigen::MatrixXd rows;
  std::size_t width = 1;

  std::size_t row_count() const { return static_cast<std::size_t>(rows.rows()); }
  /// Source index a row's score is attributed to (its last element).
  std::size_t origin_index(std::size_t row) const { return row + width - 1; }
};

FeatureMatrix window_embed(std::span<const double> values, std::size_t width);

/// Maps one score per embedded row back to one score per source point: row i
/// goes to point i + width - 1 and the first width - 1 points copy row 0.
std::vector<double> attribute_row_scores(std::span<const double> row_scores, std::size_t width);

}  // namespace odsearch
