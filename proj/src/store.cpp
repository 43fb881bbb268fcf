#include "odsearch/store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "odsearch/error.hpp"
#include "odsearch/timestamp.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace odsearch {
namespace {

constexpr const char* kManifestFile = "manifest.json";

bool valid_name(const std::string& name) {
  if (name.empty() || name.front() == '.') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-' || c == '.';
  });
}

std::string_view strip_cr(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  return line;
}

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '"')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

json windows_to_json(const std::vector<AnomalyWindow>& windows) {
  json out = json::array();
  for (const auto& w : windows) out.push_back({w.start, w.end});
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

RawSeries read_series_csv(const fs::path& csv) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + csv.string());
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw Error(ErrorCode::kEmptyFile, csv.string() + " has no header");
  ++line_no;
  std::string_view header = strip_cr(line);
  if (header.size() >= 3 && static_cast<unsigned char>(header[0]) == 0xEF) header.remove_prefix(3);
  if (header != "timestamp,value") {
    throw Error(ErrorCode::kParseError, "line 1: expected header 'timestamp,value'");
  }
  RawSeries raw;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = strip_cr(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const auto t = parse_timestamp(row.substr(0, comma));
    const auto v = parse_double(row.substr(comma + 1));
    if (!t || !v) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": malformed field");
    }
    raw.timestamps.push_back(*t);
    raw.values.push_back(*v);
  }
  if (raw.timestamps.empty()) throw Error(ErrorCode::kEmptyFile, csv.string() + " has no data rows");
  return raw;
}

std::vector<AnomalyWindow> read_label_windows(const fs::path& labels, const std::string& name) {
  std::ifstream in(labels);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + labels.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, labels.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, "labels file must be a JSON object");

  const json* entry = nullptr;
  if (doc.contains(name)) {
    entry = &doc.at(name);
  } else {
    for (const auto& [key, value] : doc.items()) {
      if (fs::path(key).stem().string() == name) {
        entry = &value;
        break;
      }
    }
  }
  if (entry == nullptr) throw Error(ErrorCode::kParseError, "no windows for '" + name + "' in labels");
  if (!entry->is_array()) throw Error(ErrorCode::kParseError, "windows must be an array");

  std::vector<AnomalyWindow> windows;
  for (const auto& pair : *entry) {
    if (!pair.is_array() || pair.size() != 2) {
      throw Error(ErrorCode::kParseError, "each window must be a [start, end] pair");
    }
    std::optional<EpochMs> bounds[2];
    for (int i = 0; i < 2; ++i) {
      if (pair[i].is_string()) {
        bounds[i] = parse_timestamp(pair[i].get<std::string>());
      } else if (pair[i].is_number_integer()) {
        bounds[i] = pair[i].get<EpochMs>();
      }
      if (!bounds[i]) throw Error(ErrorCode::kParseError, "bad window bound " + pair[i].dump());
    }
    windows.push_back({*bounds[0], *bounds[1]});
  }
  std::sort(windows.begin(), windows.end(),
            [](const AnomalyWindow& a, const AnomalyWindow& b) { return a.start < b.start; });
  return windows;
}

Store Store::connect(const fs::path& root) {
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec || !fs::is_directory(root)) {
    throw Error(ErrorCode::kPathInaccessible, root.string() + (ec ? ": " + ec.message() : ""));
  }
  Store store(root);
  const fs::path manifest_path = root / kManifestFile;
  if (!fs::exists(manifest_path)) return store;

  std::ifstream in(manifest_path);
  if (!in) throw Error(ErrorCode::kPathInaccessible, "cannot read " + manifest_path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestCorrupt, e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer()) {
    throw Error(ErrorCode::kManifestCorrupt, "missing version tag");
  }
  if (doc["version"].get<int>() != kManifestVersion) {
    throw Error(ErrorCode::kVersionMismatch, "manifest version " + doc["version"].dump());
  }
  if (!doc.contains("datasets") || !doc["datasets"].is_object()) {
    throw Error(ErrorCode::kManifestCorrupt, "missing datasets object");
  }
  try {
    for (const auto& [name, entry] : doc["datasets"].items()) {
      DatasetMeta meta;
      meta.name = name;
      meta.n_points = entry.at("n_points").get<std::size_t>();
      meta.t_min = entry.at("t_min").get<EpochMs>();
      meta.t_max = entry.at("t_max").get<EpochMs>();
      meta.has_labels = entry.at("has_labels").get<bool>();
      meta.source_file = entry.at("source_file").get<std::string>();
      std::vector<AnomalyWindow> windows;
      for (const auto& w : entry.value("windows", json::array())) {
        windows.push_back({w.at(0).get<EpochMs>(), w.at(1).get<EpochMs>()});
      }
      if (meta.n_points == 0 || meta.t_min > meta.t_max) {
        throw Error(ErrorCode::kManifestCorrupt, "inconsistent metadata for '" + name + "'");
      }
      if (!fs::is_regular_file(root / meta.source_file)) {
        throw Error(ErrorCode::kManifestCorrupt, "missing data file for '" + name + "'");
      }
      store.manifest_.emplace(name, std::move(meta));
      store.windows_.emplace(name, std::move(windows));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kManifestCorrupt, e.what());
  }
  return store;
}

void Store::write_manifest() const {
  json datasets = json::object();
  for (const auto& [name, meta] : manifest_) {
    datasets[name] = {{"n_points", meta.n_points},         {"t_min", meta.t_min},
                      {"t_max", meta.t_max},               {"has_labels", meta.has_labels},
                      {"source_file", meta.source_file}, {"windows", windows_to_json(windows_.at(name))}};
  }
  const json doc = {{"version", kManifestVersion}, {"datasets", datasets}};
  const fs::path tmp = root_ / (std::string(kManifestFile) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kPathInaccessible, "cannot write " + tmp.string());
    out << doc.dump(2) << '\n';
    if (!out.flush()) throw Error(ErrorCode::kPathInaccessible, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, root_ / kManifestFile, ec);
  if (ec) throw Error(ErrorCode::kPathInaccessible, "manifest rename failed: " + ec.message());
}

DatasetMeta Store::ingest_csv(const std::string& name, const fs::path& csv,
                              const std::optional<fs::path>& labels) {
  if (!valid_name(name)) throw Error(ErrorCode::kInvalidName, "'" + name + "'");
  if (manifest_.contains(name)) throw Error(ErrorCode::kDuplicateName, "'" + name + "'");

  RawSeries raw = read_series_csv(csv);
  std::vector<AnomalyWindow> windows;
  if (labels) windows = read_label_windows(*labels, name);
  const auto ds = build_dataset(name, std::move(raw.timestamps), std::move(raw.values), windows);

  const std::string rel = "data/" + name + ".csv";
  fs::create_directories(root_ / "data");
  {
    std::ofstream out(root_ / rel, std::ios::trunc);
    if (!out) throw Error(ErrorCode::kPathInaccessible, "cannot write " + rel);
    out << "timestamp,value\n";
    const auto ts = ds.timestamps();
    const auto vs = ds.values();
    for (std::size_t i = 0; i < ds.size(); ++i) out << ts[i] << ',' << format_double(vs[i]) << '\n';
    if (!out.flush()) throw Error(ErrorCode::kPathInaccessible, "short write to " + rel);
  }

  DatasetMeta meta{name, ds.size(), ds.timestamps().front(), ds.timestamps().back(), labels.has_value(),
                   rel};
  manifest_[name] = meta;
  windows_[name] = std::move(windows);
  try {
    write_manifest();
  } catch (...) {
    manifest_.erase(name);
    windows_.erase(name);
    throw;
  }
  return meta;
}

TimeSeriesDataset Store::load(const std::string& name) const {
  const auto it = manifest_.find(name);
  if (it == manifest_.end()) throw Error(ErrorCode::kUnknownDataset, "'" + name + "'");
  RawSeries raw;
  try {
    raw = read_series_csv(root_ / it->second.source_file);
  } catch (const Error& e) {
    throw Error(ErrorCode::kManifestCorrupt, e.what());
  }
  return build_dataset(name, std::move(raw.timestamps), std::move(raw.values), windows_.at(name));
}

TimeSeriesDataset Store::query_data(const std::string& name, EpochMs t_start, EpochMs t_end) const {
  if (!manifest_.contains(name)) throw Error(ErrorCode::kUnknownDataset, "'" + name + "'");
  if (t_start > t_end) throw Error(ErrorCode::kInvalidRange, "t_start > t_end");
  return load(name).slice_time(t_start, t_end);
}

}  // namespace odsearch
