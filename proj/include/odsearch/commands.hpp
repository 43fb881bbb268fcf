#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "odsearch/dataset.hpp"
#include "odsearch/error.hpp"
#include "odsearch/plot.hpp"

namespace odsearch {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitData = 3,
  kExitSearch = 4,
};

/// Exit status for an error raised while running a command.
int exit_code_for(ErrorCode code);

/// Store root: explicit flag, else $ODSEARCH_STORE, else "./odsearch-store".
std::filesystem::path resolve_store(const std::optional<std::filesystem::path>& flag);

struct IngestArgs {
  std::filesystem::path store;
  std::string name;
  std::filesystem::path csv;
  std::optional<std::filesystem::path> labels;
};

struct QueryArgs {
  std::filesystem::path store;
  std::string dataset;
  std::optional<EpochMs> t_start;
  std::optional<EpochMs> t_end;
  std::optional<std::filesystem::path> out_csv;  // stdout when absent
};

struct SearchArgs {
  std::filesystem::path store;
  std::string dataset;
  int budget = 60;
  int n_init = 10;
  std::uint64_t seed = 0;
  double split_ratio = 0.7;
  std::string metric = "f1";
  std::string strategy = "guided";  // or "random"
  std::filesystem::path trace_path;
  std::filesystem::path policy_out;
  bool timing = false;
};

struct DetectArgs {
  std::filesystem::path store;
  std::string dataset;
  std::filesystem::path policy_path;
  std::filesystem::path out_csv;
  std::optional<std::uint64_t> seed;  // overrides the policy's detector seed
};

struct ScoreArgs {
  std::filesystem::path store;
  std::string dataset;
  std::filesystem::path scores_csv;
  std::optional<std::filesystem::path> labels;  // overrides the stored windows
  std::optional<std::string> profile;           // all three when absent
};

struct PlotArgs {
  std::filesystem::path store;
  std::string dataset;
  std::string kind;  // overlay | decomposition | density | search_progress
  std::optional<std::filesystem::path> scores_csv;
  std::optional<std::filesystem::path> trace;
  std::optional<int> period;
  std::filesystem::path out_svg;
  /// decomposition only: also write `timestamp,value,trend,seasonal,residual`
  std::optional<std::filesystem::path> table_out;
  int width = 960;
  int height = 480;
};

int cmd_ingest(const IngestArgs& args, std::ostream& out, std::ostream& err);
int cmd_query(const QueryArgs& args, std::ostream& out, std::ostream& err);
int cmd_search(const SearchArgs& args, std::ostream& out, std::ostream& err);
int cmd_detect(const DetectArgs& args, std::ostream& out, std::ostream& err);
int cmd_score(const ScoreArgs& args, std::ostream& out, std::ostream& err);
int cmd_plot(const PlotArgs& args, std::ostream& out, std::ostream& err);

/// Rows of a detect output file.
struct ScoreTable {
  std::vector<EpochMs> timestamps;
  std::vector<double> scores;
  std::vector<std::uint8_t> flags;
  std::vector<double> raw_scores;
};

/// Reads `timestamp,score,flag,raw_score`. Throws kParseError / kEmptyFile.
ScoreTable read_scores_csv(const std::filesystem::path& path);

struct DecompositionTable {
  double level = 0.0;
  std::vector<EpochMs> timestamps;
  std::vector<double> values;
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> residual;
};

/// Writes the decomposition CSV: a `# level=<v>` comment line, then
/// `timestamp,value,trend,seasonal,residual` rows.
std::string format_decomposition_csv(const DecompositionTable& table);
/// Throws kParseError / kEmptyFile.
DecompositionTable read_decomposition_csv(const std::filesystem::path& path);

/// Progress curves from per-trial objectives in trial order: the running best
/// (one point per trial) and the mean of the k best objectives so far, which
/// starts at trial k.
std::vector<Series> progress_series(const std::vector<double>& objectives, std::size_t k = 5);

}  // namespace odsearch
