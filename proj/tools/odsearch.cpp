// Command-line driver: ingest, query, search, detect, score and plot.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "odsearch/commands.hpp"
#include "odsearch/timestamp.hpp"

namespace {

std::optional<odsearch::EpochMs> time_flag(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  const auto t = odsearch::parse_timestamp(text);
  if (!t) throw CLI::ValidationError(flag, "not a timestamp: " + text);
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace odsearch;

  CLI::App app{"Automated outlier-detection pipeline search over labelled time series"};
  app.require_subcommand(1);
  std::optional<std::string> store_flag;
  app.add_option("--store", store_flag, "Store root (default: $ODSEARCH_STORE)");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Import a timestamp,value CSV into the store");
  ingest_cmd->add_option("--name", ingest.name, "Dataset name")->required();
  ingest_cmd->add_option("--csv", ingest.csv, "Input CSV")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--labels", ingest.labels, "Combined anomaly-window labels JSON");

  QueryArgs query;
  std::string query_from, query_to;
  auto* query_cmd = app.add_subcommand("query", "Print a dataset (or a time range of it) as CSV");
  query_cmd->add_option("--dataset", query.dataset)->required();
  query_cmd->add_option("--from", query_from, "Inclusive start (epoch ms or ISO)");
  query_cmd->add_option("--to", query_to, "Inclusive end (epoch ms or ISO)");
  query_cmd->add_option("--out", query.out_csv, "Write to a file instead of stdout");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "Search detector pipelines on a labelled dataset");
  search_cmd->add_option("--dataset", search.dataset)->required();
  search_cmd->add_option("--budget", search.budget, "Number of trials")->capture_default_str();
  search_cmd->add_option("--n-init", search.n_init, "Uniform warm-start trials")->capture_default_str();
  search_cmd->add_option("--seed", search.seed)->capture_default_str();
  search_cmd->add_option("--split-ratio", search.split_ratio, "Chronological train fraction")->capture_default_str();
  search_cmd->add_option("--metric", search.metric)->capture_default_str();
  search_cmd->add_option("--strategy", search.strategy, "guided or random")->capture_default_str();
  search_cmd->add_option("--trace", search.trace_path, "Trace JSONL output")->required();
  search_cmd->add_option("--policy-out", search.policy_out, "Best policy JSON output")->required();
  search_cmd->add_flag("--timing", search.timing, "Record wall-clock time per trial in the trace");

  DetectArgs detect;
  std::uint64_t detect_seed = 0;
  bool detect_seed_set = false;
  auto* detect_cmd = app.add_subcommand("detect", "Score a dataset with a policy");
  detect_cmd->add_option("--dataset", detect.dataset)->required();
  detect_cmd->add_option("--policy", detect.policy_path)->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--out", detect.out_csv, "Scores CSV output")->required();
  auto* detect_seed_opt = detect_cmd->add_option("--seed", detect_seed, "Override the policy's detector seed");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "F1 and NAB scores of a detect output");
  score_cmd->add_option("--dataset", score.dataset)->required();
  score_cmd->add_option("--scores", score.scores_csv)->required()->check(CLI::ExistingFile);
  score_cmd->add_option("--labels", score.labels, "Labels JSON overriding the stored windows");
  score_cmd->add_option("--profile", score.profile, "standard, reward_low_fp or reward_low_fn (default: all)");

  PlotArgs plot;
  auto* plot_cmd = app.add_subcommand("plot", "Render an SVG chart");
  plot_cmd->add_option("--kind", plot.kind)
      ->required()
      ->check(CLI::IsMember({"overlay", "decomposition", "density", "search_progress"}));
  plot_cmd->add_option("--dataset", plot.dataset);
  plot_cmd->add_option("--scores", plot.scores_csv, "Detect output (overlay)");
  plot_cmd->add_option("--trace", plot.trace, "Search trace (search_progress)");
  plot.period = 24;
  plot_cmd->add_option("--period", plot.period, "Seasonal period in samples (decomposition)")->capture_default_str();
  plot_cmd->add_option("--table", plot.table_out, "Decomposition CSV output (decomposition)");
  plot_cmd->add_option("--width", plot.width)->capture_default_str();
  plot_cmd->add_option("--height", plot.height)->capture_default_str();
  plot_cmd->add_option("--out", plot.out_svg, "SVG output")->required();

  try {
    app.parse(argc, argv);
    query.t_start = time_flag(query_from, "--from");
    query.t_end = time_flag(query_to, "--to");
    detect_seed_set = detect_seed_opt->count() > 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  const auto store = resolve_store(store_flag ? std::optional<std::filesystem::path>(*store_flag) : std::nullopt);
  ingest.store = query.store = search.store = detect.store = score.store = plot.store = store;

  if (*ingest_cmd) return cmd_ingest(ingest, std::cout, std::cerr);
  if (*query_cmd) return cmd_query(query, std::cout, std::cerr);
  if (*search_cmd) return cmd_search(search, std::cout, std::cerr);
  if (*detect_cmd) {
    if (detect_seed_set) detect.seed = detect_seed;
    return cmd_detect(detect, std::cout, std::cerr);
  }
  if (*score_cmd) return cmd_score(score, std::cout, std::cerr);
  if (plot.kind != "search_progress" && plot.dataset.empty()) {
    std::cerr << "error: plot kind '" << plot.kind << "' requires --dataset\n";
    return kExitUsage;
  }
  return cmd_plot(plot, std::cout, std::cerr);
}
