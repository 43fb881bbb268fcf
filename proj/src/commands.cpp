#include "odsearch/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "odsearch/detectors.hpp"
#include "odsearch/evaluation.hpp"
#include "odsearch/search.hpp"
#include "odsearch/store.hpp"
#include "odsearch/timestamp.hpp"
#include "odsearch/tsa.hpp"

namespace odsearch {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kPathInaccessible, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::kPathInaccessible, "write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kPathInaccessible, "cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int report(const std::exception& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (const auto* ours = dynamic_cast<const Error*>(&e)) return exit_code_for(ours->code());
  return kExitData;
}

std::vector<double> min_max(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  std::vector<double> out(v.size(), 0.0);
  if (v.empty() || !(*hi > *lo)) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / (*hi - *lo);
  return out;
}

std::vector<double> index_axis(std::size_t n) {
  std::vector<double> x(n);
  std::iota(x.begin(), x.end(), 0.0);
  return x;
}

double parse_number(std::string_view cell, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
    throw Error(ErrorCode::kParseError, "line " + std::to_string(line) + ": bad number '" + std::string(cell) + "'");
  }
  return v;
}

std::vector<double> read_trace_objectives(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kPathInaccessible, "cannot read " + path.string());
  std::vector<double> objectives;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      objectives.push_back(trial_from_json(nlohmann::json::parse(line)).objective);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (objectives.empty()) throw Error(ErrorCode::kEmptyFile, path.string() + " has no trials");
  return objectives;
}

void require_aligned(const TimeSeriesDataset& ds, const ScoreTable& table) {
  const auto ts = ds.timestamps();
  if (table.timestamps.size() != ts.size() || !std::equal(ts.begin(), ts.end(), table.timestamps.begin())) {
    throw Error(ErrorCode::kLengthMismatch, "scores timestamps do not align with dataset '" + ds.name() + "'");
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kInvalidName:
    case ErrorCode::kInvalidRange:
    case ErrorCode::kInvalidPeriod:
      return kExitUsage;
    case ErrorCode::kHistoryTooSmall:
    case ErrorCode::kEmptyObservations:
    case ErrorCode::kTooFewSamples:
    case ErrorCode::kDimensionMismatch:
      return kExitSearch;
    default:
      return kExitData;
  }
}

std::filesystem::path resolve_store(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ODSEARCH_STORE"); env != nullptr && *env != '\0') return env;
  return "odsearch-store";
}

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err) {
  try {
    auto store = Store::connect(args.store);
    const auto meta = store.ingest_csv(args.name, args.csv, args.labels);
    out << "ingested " << meta.name << ": " << meta.n_points << " points, " << format_timestamp(meta.t_min)
        << " .. " << format_timestamp(meta.t_max) << (meta.has_labels ? ", labelled" : "") << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_query(const QueryArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto store = Store::connect(args.store);
    const auto it = store.manifest().find(args.dataset);
    if (it == store.manifest().end()) throw Error(ErrorCode::kUnknownDataset, "no dataset named '" + args.dataset + "'");
    const auto ds = store.query_data(args.dataset, args.t_start.value_or(it->second.t_min),
                                     args.t_end.value_or(it->second.t_max));
    std::ostringstream csv;
    csv << "timestamp,value\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      csv << ds.timestamps()[i] << ',' << format_double(ds.values()[i]) << '\n';
    }
    if (args.out_csv) {
      write_text(*args.out_csv, csv.str());
    } else {
      out << csv.str();
    }
    return kExitOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err) {
  if (args.metric != "f1") {
    err << "error: unsupported metric '" << args.metric << "' (only f1)\n";
    return kExitUsage;
  }
  if (args.strategy != "guided" && args.strategy != "random") {
    err << "error: strategy must be guided or random\n";
    return kExitUsage;
  }
  if (args.budget < 1) {
    err << "error: budget must be at least 1\n";
    return kExitUsage;
  }
  if (!(args.split_ratio > 0.0 && args.split_ratio < 1.0)) {
    err << "error: split ratio must lie in (0, 1)\n";
    return kExitUsage;
  }

  TimeSeriesDataset ds;
  try {
    ds = Store::connect(args.store).load(args.dataset);
    if (ds.windows().empty()) throw Error(ErrorCode::kNoLabels, "dataset '" + args.dataset + "' has no labels");
  } catch (const std::exception& e) {
    return report(e, err);
  }

  try {
    std::ofstream trace(args.trace_path, std::ios::binary | std::ios::trunc);
    if (!trace) throw Error(ErrorCode::kPathInaccessible, "cannot write " + args.trace_path.string());
    SearchBudget budget;
    budget.max_trials = args.budget;
    budget.n_init = args.n_init;
    SearchOptions options;
    options.split_ratio = args.split_ratio;
    options.strategy = args.strategy == "random" ? SearchStrategy::kRandom : SearchStrategy::kGuided;
    options.record_timing = args.timing;

    const auto result = run_search(ds, default_space(), budget, args.seed, options, [&](const TrialRecord& t) {
      trace << trial_to_json(t).dump() << '\n';
      trace.flush();
    });
    write_text(args.policy_out, policy_to_json(result.best.policy).dump(2) + "\n");
    out << "best " << args.metric << ' ' << fixed(result.best.objective, 6) << " at trial " << result.best.iteration
        << " (" << algorithm_name(result.best.policy.algorithm) << ")\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: search aborted: " << e.what() << '\n';
    return e.code() == ErrorCode::kPathInaccessible ? kExitData : kExitSearch;
  } catch (const std::exception& e) {
    err << "error: search aborted: " << e.what() << '\n';
    return kExitSearch;
  }
}

int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err) {
  const SearchSpace space = default_space();
  PipelinePolicy policy;
  try {
    policy = policy_from_json(nlohmann::json::parse(read_text(args.policy_path)));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kPathInaccessible) return report(e, err);
    err << "error: malformed policy: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed policy: " << e.what() << '\n';
    return kExitUsage;
  }
  if (const auto problems = validate(space, policy); !problems.empty()) {
    err << "error: invalid policy:";
    for (const auto& p : problems) err << ' ' << p << ';';
    err << '\n';
    return kExitUsage;
  }

  try {
    if (args.seed) policy.seed = *args.seed & 0xffffffffULL;
    const auto ds = Store::connect(args.store).load(args.dataset);
    const std::size_t width = policy.window();
    if (ds.size() < width + 1) throw Error(ErrorCode::kTooFewRows, "dataset shorter than the policy window");

    const auto values = ds.values();
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    double sd = std::sqrt(var / static_cast<double>(values.size()));
    if (!(sd > 1e-12)) sd = 1.0;
    std::vector<double> series(values.size());
    std::transform(values.begin(), values.end(), series.begin(), [&](double v) { return (v - mean) / sd; });

    const FeatureMatrix features = window_embed(series, width);
    const ScoreVector raw =
        fit_score(detector_config(policy), features, static_cast<Eigen::Index>(features.row_count()));
    const auto flags = threshold_by_contamination(raw, policy.contamination()).bits;
    const auto scaled = min_max(raw);

    std::ostringstream csv;
    csv << "timestamp,score,flag,raw_score\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
      csv << ds.timestamps()[i] << ',' << format_double(scaled[i]) << ',' << int{flags[i]} << ','
          << format_double(raw[i]) << '\n';
    }
    write_text(args.out_csv, csv.str());
    out << "flagged " << std::count(flags.begin(), flags.end(), std::uint8_t{1}) << " of " << ds.size()
        << " points\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<NabProfile> profiles;
  if (args.profile) {
    const auto p = find_nab_profile(*args.profile);
    if (!p) {
      err << "error: unknown profile '" << *args.profile << "'\n";
      return kExitUsage;
    }
    profiles.push_back(*p);
  } else {
    profiles.assign(nab_profiles().begin(), nab_profiles().end());
  }

  try {
    auto ds = Store::connect(args.store).load(args.dataset);
    if (args.labels) {
      auto windows = read_label_windows(*args.labels, args.dataset);
      ds = build_dataset(ds.name(), {ds.timestamps().begin(), ds.timestamps().end()},
                         {ds.values().begin(), ds.values().end()}, std::move(windows));
    }
    const ScoreTable table = read_scores_csv(args.scores_csv);
    require_aligned(ds, table);

    out << "f1 " << fixed(f1_score(confusion(table.flags, labels_from_windows(ds))), 6) << '\n';
    for (const auto& p : profiles) out << "nab_" << p.name << ' ' << fixed(nab_score(ds, table.flags, p), 3) << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err) {
  PlotSpec spec;
  spec.width = args.width;
  spec.height = args.height;
  const auto missing = [&](const char* what) {
    err << "error: plot kind '" << args.kind << "' requires " << what << '\n';
    return kExitUsage;
  };

  try {
    if (args.kind == "search_progress") {
      if (!args.trace) return missing("--trace");
      spec.kind = PlotKind::kSearchProgress;
      spec.title = "Search progress";
      spec.series = progress_series(read_trace_objectives(*args.trace));
    } else if (args.kind == "overlay" || args.kind == "decomposition" || args.kind == "density") {
      if (args.kind == "overlay" && !args.scores_csv) return missing("--scores");
      if (args.kind == "decomposition" && !args.period) return missing("--period");
      const auto ds = Store::connect(args.store).load(args.dataset);
      const auto values = ds.values();
      if (values.empty()) throw Error(ErrorCode::kEmptySeries, "dataset '" + ds.name() + "' is empty");

      if (args.kind == "overlay") {
        const ScoreTable table = read_scores_csv(*args.scores_csv);
        require_aligned(ds, table);
        spec.kind = PlotKind::kOverlay;
        spec.title = ds.name() + ": value and outlier score";
        const auto x = index_axis(ds.size());
        spec.series.push_back({"value", x, min_max(values)});
        spec.series.push_back({"score", x, table.scores});
      } else if (args.kind == "decomposition") {
        const auto d = decompose(values, *args.period);
        spec.kind = PlotKind::kDecomposition;
        spec.title = ds.name() + ": decomposition (period " + std::to_string(*args.period) + ")";
        spec.height = std::max(args.height, 640);
        const auto x = index_axis(ds.size());
        spec.series.push_back({"level", x, std::vector<double>(ds.size(), d.level)});
        spec.series.push_back({"trend", x, d.trend});
        spec.series.push_back({"seasonal", x, d.seasonal});
        spec.series.push_back({"residual", x, d.residual});
        if (args.table_out) {
          write_text(*args.table_out,
                     format_decomposition_csv({d.level,
                                               {ds.timestamps().begin(), ds.timestamps().end()},
                                               {values.begin(), values.end()},
                                               d.trend,
                                               d.seasonal,
                                               d.residual}));
        }
      } else {
        const auto curve = kde(values);
        spec.kind = PlotKind::kDensity;
        spec.title = ds.name() + ": value density (h=" + fixed(curve.bandwidth, 4) + ")";
        spec.series.push_back({"density", curve.grid, curve.density});
      }
    } else {
      err << "error: unknown plot kind '" << args.kind << "'\n";
      return kExitUsage;
    }
    write_text(args.out_svg, render_svg(spec));
    out << "wrote " << args.out_svg.string() << '\n';
    return kExitOk;
  } catch (const std::exception& e) {
    return report(e, err);
  }
}

ScoreTable read_scores_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kPathInaccessible, "cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw Error(ErrorCode::kEmptyFile, path.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,score,flag,raw_score") {
    throw Error(ErrorCode::kParseError, "line 1: expected header timestamp,score,flag,raw_score");
  }
  ScoreTable table;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      cells.push_back(rest.substr(0, pos));
    }
    cells.push_back(rest);
    if (cells.size() != 4) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 4 fields");
    }
    const auto ts = parse_timestamp(cells[0]);
    if (!ts) throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": bad timestamp");
    table.timestamps.push_back(*ts);
    table.scores.push_back(parse_number(cells[1], line_no));
    if (cells[2] != "0" && cells[2] != "1") {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": flag must be 0 or 1");
    }
    table.flags.push_back(cells[2] == "1" ? 1 : 0);
    table.raw_scores.push_back(parse_number(cells[3], line_no));
  }
  if (table.timestamps.empty()) throw Error(ErrorCode::kEmptyFile, path.string() + " has no data rows");
  return table;
}

std::string format_decomposition_csv(const DecompositionTable& table) {
  std::ostringstream csv;
  csv << "# level=" << format_double(table.level) << '\n' << "timestamp,value,trend,seasonal,residual\n";
  for (std::size_t i = 0; i < table.timestamps.size(); ++i) {
    csv << table.timestamps[i] << ',' << format_double(table.values[i]) << ',' << format_double(table.trend[i]) << ','
        << format_double(table.seasonal[i]) << ',' << format_double(table.residual[i]) << '\n';
  }
  return csv.str();
}

DecompositionTable read_decomposition_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kPathInaccessible, "cannot read " + path.string());
  std::string line;
  if (!std::getline(f, line)) throw Error(ErrorCode::kEmptyFile, path.string() + " is empty");
  constexpr std::string_view kLevel = "# level=";
  if (!line.starts_with(kLevel)) throw Error(ErrorCode::kParseError, "line 1: expected '# level=<value>'");
  DecompositionTable table;
  table.level = parse_number(std::string_view(line).substr(kLevel.size()), 1);
  if (!std::getline(f, line) || line != "timestamp,value,trend,seasonal,residual") {
    throw Error(ErrorCode::kParseError, "line 2: expected header timestamp,value,trend,seasonal,residual");
  }
  std::size_t line_no = 2;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      cells.push_back(rest.substr(0, pos));
    }
    cells.push_back(rest);
    if (cells.size() != 5) throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 5 fields");
    const auto ts = parse_timestamp(cells[0]);
    if (!ts) throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": bad timestamp");
    table.timestamps.push_back(*ts);
    table.values.push_back(parse_number(cells[1], line_no));
    table.trend.push_back(parse_number(cells[2], line_no));
    table.seasonal.push_back(parse_number(cells[3], line_no));
    table.residual.push_back(parse_number(cells[4], line_no));
  }
  if (table.timestamps.empty()) throw Error(ErrorCode::kEmptyFile, path.string() + " has no data rows");
  return table;
}

std::vector<Series> progress_series(const std::vector<double>& objectives, std::size_t k) {
  Series best{"best so far", {}, {}};
  Series top{"top-" + std::to_string(k) + " mean", {}, {}};
  std::vector<double> seen;
  for (std::size_t i = 0; i < objectives.size(); ++i) {
    seen.push_back(objectives[i]);
    std::sort(seen.begin(), seen.end(), std::greater<>());
    const double x = static_cast<double>(i + 1);
    best.x.push_back(x);
    best.y.push_back(seen.front());
    if (seen.size() >= k) {
      top.x.push_back(x);
      top.y.push_back(std::accumulate(seen.begin(), seen.begin() + static_cast<std::ptrdiff_t>(k), 0.0) /
                      static_cast<double>(k));
    }
  }
  std::vector<Series> out{std::move(best)};
  if (!top.x.empty()) out.push_back(std::move(top));
  return out;
}

}  // namespace odsearch
