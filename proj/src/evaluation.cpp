#include "odsearch/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

struct IndexWindow {
  std::size_t first;
  std::size_t last;  // inclusive
  std::size_t length() const { return last - first + 1; }
};

std::vector<IndexWindow> index_windows(const TimeSeriesDataset& ds) {
  std::vector<IndexWindow> out;
  const auto ts = ds.timestamps();
  for (const auto& w : ds.windows()) {
    const auto lo = std::lower_bound(ts.begin(), ts.end(), w.start);
    const auto hi = std::upper_bound(ts.begin(), ts.end(), w.end);
    if (lo >= hi) continue;
    out.push_back({static_cast<std::size_t>(lo - ts.begin()), static_cast<std::size_t>(hi - ts.begin()) - 1});
  }
  return out;
}

}  // namespace

ConfusionCounts confusion(std::span<const std::uint8_t> predicted, std::span<const std::uint8_t> labels) {
  if (predicted.size() != labels.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                                std::to_string(labels.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool l = labels[i] != 0;
    if (p && l) ++c.tp;
    else if (p) ++c.fp;
    else if (l) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1_score(const ConfusionCounts& c) {
  const double denom = 2.0 * static_cast<double>(c.tp) + static_cast<double>(c.fp) + static_cast<double>(c.fn);
  return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(c.tp) / denom;
}

double scaled_sigmoid(double y) { return -std::tanh(2.5 * y); }

const std::array<NabProfile, 3>& nab_profiles() {
  static const std::array<NabProfile, 3> profiles = {
      NabProfile{"standard", 1.0, 0.11, 1.0},
      NabProfile{"reward_low_fp", 1.0, 0.22, 1.0},
      NabProfile{"reward_low_fn", 1.0, 0.11, 2.0},
  };
  return profiles;
}

std::optional<NabProfile> find_nab_profile(std::string_view name) {
  for (const auto& p : nab_profiles()) {
    if (p.name == name) return p;
  }
  return std::nullopt;
}

double nab_raw_score(const TimeSeriesDataset& ds, std::span<const std::uint8_t> detections,
                     const NabProfile& profile) {
  if (detections.size() != ds.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(detections.size()) + " detections for " +
                                                std::to_string(ds.size()) + " points");
  }
  const auto windows = index_windows(ds);
  std::vector<bool> detected(windows.size(), false);
  double raw = 0.0;
  std::size_t next_window = 0;  // first window whose end is at or after i
  for (std::size_t i = 0; i < detections.size(); ++i) {
    while (next_window < windows.size() && windows[next_window].last < i) ++next_window;
    if (detections[i] == 0) continue;

    if (next_window < windows.size() && windows[next_window].first <= i) {
      const auto& w = windows[next_window];
      if (detected[next_window]) continue;
      detected[next_window] = true;
      const double y = w.length() > 1 ? -1.0 + static_cast<double>(i - w.first) / static_cast<double>(w.length() - 1)
                                      : -1.0;
      raw += profile.a_tp * scaled_sigmoid(y);
    } else if (next_window == 0) {
      raw -= profile.a_fp;
    } else {
      const auto& prev = windows[next_window - 1];
      const double y = static_cast<double>(i - prev.last) / static_cast<double>(prev.length());
      raw += profile.a_fp * scaled_sigmoid(y);
    }
  }
  for (const bool d : detected) {
    if (!d) raw -= profile.a_fn;
  }
  return raw;
}

std::vector<std::uint8_t> perfect_detections(const TimeSeriesDataset& ds) {
  std::vector<std::uint8_t> bits(ds.size(), 0);
  for (const auto& w : index_windows(ds)) bits[w.first] = 1;
  return bits;
}

double nab_score(const TimeSeriesDataset& ds, std::span<const std::uint8_t> detections, const NabProfile& profile) {
  if (index_windows(ds).empty()) throw Error(ErrorCode::kNoWindows, "dataset has no window containing a point");
  const std::vector<std::uint8_t> none(ds.size(), 0);
  const double raw = nab_raw_score(ds, detections, profile);
  const double null_raw = nab_raw_score(ds, none, profile);
  const double perfect_raw = nab_raw_score(ds, perfect_detections(ds), profile);
  return 100.0 * (raw - null_raw) / (perfect_raw - null_raw);
}

}  // namespace odsearch
