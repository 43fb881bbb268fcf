#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "odsearch/dataset.hpp"

namespace odsearch {

struct DatasetMeta {
  std::string name;
  std::size_t n_points = 0;
  EpochMs t_min = 0;
  EpochMs t_max = 0;
  bool has_labels = false;
  std::string source_file;  // relative to the store root

  friend bool operator==(const DatasetMeta&, const DatasetMeta&) = default;
};

/// Directory-backed dataset store: one canonical `timestamp,value` CSV per
/// dataset plus `manifest.json` ({"version":1,"datasets":{...}}). Manifest
/// updates go through a temp file and a rename. Single writer per root.
class Store {
 public:
  static constexpr int kManifestVersion = 1;

  /// Opens (creating if needed) the store at root. Throws kPathInaccessible,
  /// kManifestCorrupt or kVersionMismatch.
  static Store connect(const std::filesystem::path& root);

  /// Parses a `timestamp,value` CSV and, optionally, a labels JSON in the
  /// combined-windows layout `{"<dataset>": [["<start>","<end>"], ...]}`.
  /// Throws kParseError, kDuplicateName, kEmptyFile, kInvalidName or any
  /// dataset validation error.
  DatasetMeta ingest_csv(const std::string& name, const std::filesystem::path& csv,
                         const std::optional<std::filesystem::path>& labels = std::nullopt);

  /// Points with t_start <= t <= t_end; windows clipped to the result.
  /// Throws kUnknownDataset or kInvalidRange.
  TimeSeriesDataset query_data(const std::string& name, EpochMs t_start, EpochMs t_end) const;

  /// Entire dataset.
  TimeSeriesDataset load(const std::string& name) const;

  const std::map<std::string, DatasetMeta>& manifest() const { return manifest_; }
  const std::filesystem::path& root() const { return root_; }

 private:
  explicit Store(std::filesystem::path root) : root_(std::move(root)) {}
  void write_manifest() const;

  std::filesystem::path root_;
  std::map<std::string, DatasetMeta> manifest_;
  std::map<std::string, std::vector<AnomalyWindow>> windows_;
};

/// Reads a `timestamp,value` CSV (header required). Throws kParseError with
/// the 1-based line number, or kEmptyFile when there are no data rows.
struct RawSeries {
  std::vector<EpochMs> timestamps;
  std::vector<double> values;
};
RawSeries read_series_csv(const std::filesystem::path& csv);

/// Windows for `name` from a combined-windows labels file. Keys are matched
/// exactly, then by file stem (so "realKnownCause/nyc_taxi.csv" matches
/// "nyc_taxi"). Throws kParseError when no key matches.
std::vector<AnomalyWindow> read_label_windows(const std::filesystem::path& labels,
                                              const std::string& name);

/// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace odsearch
