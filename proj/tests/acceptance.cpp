// Acceptance suite: one PASS/FAIL line per criterion; exits nonzero on any failure.
#define DOCTEST_CONFIG_DISABLE
#include "support.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

#include "odsearch/cmaes.hpp"
#include "odsearch/detectors.hpp"
#include "odsearch/evaluation.hpp"
#include "odsearch/parzen.hpp"
#include "odsearch/search.hpp"
#include "odsearch/store.hpp"
#include "odsearch/timestamp.hpp"
#include "odsearch/tsa.hpp"
#include "oracles.hpp"

using namespace odsearch;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kGuidedSlack = 0.02;
constexpr double kNabTolerance = 1e-9;
constexpr double kOracleTolerance = 1e-9;
constexpr double kSphereTarget = 1e-10;
constexpr double kSphereSeconds = 5.0;
constexpr double kSearchMinutes = 10.0;
constexpr double kEiHitRate = 0.99;
constexpr double kGradientTolerance = 1e-4;
constexpr double kIdentityTolerance = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index n, Eigen::Index d) {
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = rng.normal();
  }
  return X;
}

double max_abs_diff(const ScoreVector& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double top5_mean(const SearchHistory& history) {
  std::vector<double> f;
  for (const auto& t : history) f.push_back(t.objective);
  std::sort(f.begin(), f.end(), std::greater<>());
  const std::size_t k = std::min<std::size_t>(5, f.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += f[i];
  return sum / static_cast<double>(k);
}

Outcome guided_beats_random() {
  const auto t0 = Clock::now();
  SearchBudget budget;
  budget.max_trials = 60;
  int wins = 0;
  double worst_gap = 0.0;
  std::ostringstream detail;
  for (std::uint64_t d = 0; d < 3; ++d) {
    const auto ds = testsupport::synthetic_series(100 + d, 2000, 20);
    double guided = 0.0, random = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      guided += top5_mean(run_search(ds, default_space(), budget, seed, {0.7, SearchStrategy::kGuided}).history);
      random += top5_mean(run_search(ds, default_space(), budget, seed, {0.7, SearchStrategy::kRandom}).history);
    }
    guided /= 5.0;
    random /= 5.0;
    wins += guided >= random;
    worst_gap = std::max(worst_gap, random - guided);
    detail << fmt("d%d guided %.4f random %.4f; ", static_cast<int>(d), guided, random);
  }
  const double minutes = seconds_since(t0) / 60.0;
  detail << fmt("%.2f min", minutes);
  return {wins >= 2 && worst_gap <= kGuidedSlack && minutes < kSearchMinutes, detail.str()};
}

Outcome nab_calibration() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ds = testsupport::synthetic_series(seed, 1000, 8);
    for (const auto& p : nab_profiles()) {
      worst = std::max(worst, std::abs(nab_score(ds, perfect_detections(ds), p) - 100.0));
      worst = std::max(worst, std::abs(nab_score(ds, std::vector<std::uint8_t>(ds.size(), 0), p)));
    }
  }
  return {worst <= kNabTolerance, fmt("max deviation %.3g over 10 series x 3 profiles", worst)};
}

Outcome detector_oracles() {
  Rng rng(2024);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    const auto n = static_cast<Eigen::Index>(5 + rng.index(26));
    const auto d = static_cast<Eigen::Index>(1 + rng.index(4));
    const Eigen::MatrixXd X = gaussian(rng, n, d);
    const auto pts = oracle::to_points(X);
    const int k = 2 + static_cast<int>(rng.index(static_cast<std::uint64_t>(n - 3)));
    for (int agg = 0; agg < 3; ++agg) {
      worst = std::max(worst, max_abs_diff(knn_scores(X, k, static_cast<KnnAggregate>(agg)),
                                           oracle::knn(pts, static_cast<std::size_t>(k), agg)));
    }
    worst = std::max(worst, max_abs_diff(lof_scores(X, k), oracle::lof(pts, static_cast<std::size_t>(k))));
  }
  for (int rep = 0; rep < 20; ++rep) {
    const Eigen::MatrixXd X = gaussian(rng, 20 + static_cast<Eigen::Index>(rng.index(200)), 1 + rng.index(4));
    const int bins = 2 + static_cast<int>(rng.index(49));
    const double alpha = rng.uniform(0.0, 1.0);
    worst = std::max(worst, max_abs_diff(hbos_scores(X, bins, alpha), oracle::hbos(oracle::to_points(X), bins, alpha)));
  }
  return {worst <= kOracleTolerance, fmt("max abs error %.3g (50 KNN/LOF sets, 20 HBOS sets)", worst)};
}

Outcome detectors_rank_outlier() {
  constexpr Eigen::Index n = 500;
  const auto top = static_cast<std::size_t>(std::ceil(0.02 * n));
  int hits = 0, total = 0;
  std::ostringstream misses;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed + 500);
    Eigen::MatrixXd X = gaussian(rng, n, 2);
    const Eigen::Index planted = static_cast<Eigen::Index>(rng.index(n));
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    X.row(planted) << 10.0 * std::cos(angle), 10.0 * std::sin(angle);
    const std::vector<DetectorConfig> configs{
        {Algorithm::kKnn, {{"k", 10}, {"method", 0}}, {}, seed},
        {Algorithm::kLof, {{"k", 20}}, {}, seed},
        {Algorithm::kHbos, {{"n_bins", 20}}, {{"alpha", 0.1}}, seed},
        {Algorithm::kIforest, {{"n_trees", 100}, {"subsample", 128}}, {}, seed},
        {Algorithm::kPca, {}, {{"variance_fraction", 0.75}}, seed},
        {Algorithm::kCblof, {{"n_clusters", 8}}, {{"alpha", 0.9}, {"beta", 5.0}}, seed},
        {Algorithm::kRobustCov, {}, {{"support_fraction", 0.75}}, seed},
        {Algorithm::kAutoencoder, {{"hidden", 1}, {"epochs", 100}}, {{"lr", 0.05}}, seed},
    };
    for (const auto& cfg : configs) {
      const auto s = fit_score(cfg, X, n);
      const double mine = s[static_cast<std::size_t>(planted)];
      const auto above = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double v) { return v > mine; }));
      ++total;
      if (above < top) {
        ++hits;
      } else {
        misses << ' ' << algorithm_name(cfg.algorithm) << "/seed" << seed;
      }
    }
  }
  return {hits == total, fmt("%d/%d in top %zu", hits, total, top) + misses.str()};
}

Outcome cmaes_sphere() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    auto state = cmaes_initial(3);
    const std::size_t lambda = cmaes_population(3);
    double best = 1e300;
    for (int gen = 0; gen < 200 && best >= kSphereTarget; ++gen) {
      std::vector<RankedCode> pop;
      for (std::size_t i = 0; i < lambda; ++i) {
        const Eigen::VectorXd x = cmaes_sample(state, rng);
        const double f = (x.array() - 0.7).square().sum();
        best = std::min(best, f);
        pop.push_back({x, f});
      }
      state = cmaes_update(state, pop);
    }
    worst = std::max(worst, best);
  }
  const double secs = seconds_since(t0);
  return {worst < kSphereTarget && secs < kSphereSeconds, fmt("worst best %.3g, %.3f s", worst, secs)};
}

Outcome ei_selection() {
  Rng rng(12);
  int hits = 0;
  constexpr int kReps = 20;
  for (int rep = 0; rep < kReps; ++rep) {
    std::vector<std::vector<double>> good, bad;
    for (int i = 0; i < 20; ++i) good.push_back({rng.uniform(0.6, 0.8)});
    for (int i = 0; i < 80; ++i) {
      const double v = rng.uniform(0.0, 0.8);
      bad.push_back({v < 0.6 ? v : v + 0.2});
    }
    const auto l = ProductDensity::fit(good, 1);
    const auto g = ProductDensity::fit(bad, 1);
    double best = -1.0, best_x = 0.0;
    for (int c = 0; c < 1000; ++c) {
      const std::vector<double> x{rng.uniform()};
      const double r = ei_rank(x, l, g);
      if (r > best) {
        best = r;
        best_x = x[0];
      }
    }
    hits += best_x >= 0.6 && best_x <= 0.8;
  }
  const double rate = hits / static_cast<double>(kReps);
  return {rate >= kEiHitRate, fmt("%d/%d selections inside the good region", hits, kReps)};
}

Outcome autoencoder_gradient() {
  Rng rng(21);
  double worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const int width = 1 + static_cast<int>(rng.index(5));
    const int hidden = 1 + static_cast<int>(rng.index(static_cast<std::uint64_t>(width)));
    const Eigen::MatrixXd X = gaussian(rng, 3 + static_cast<Eigen::Index>(rng.index(20)), width);
    Autoencoder ae(width, hidden, static_cast<std::uint64_t>(rep));
    ae.train(X, 0.05, 5);
    const Eigen::VectorXd theta = ae.parameters();
    const Eigen::VectorXd grad = ae.gradient(X);
    Eigen::VectorXd numeric(theta.size());
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Eigen::VectorXd t = theta;
      t(i) += 1e-5;
      ae.set_parameters(t);
      const double up = ae.loss(X);
      t(i) -= 2e-5;
      ae.set_parameters(t);
      numeric(i) = (up - ae.loss(X)) / 2e-5;
    }
    ae.set_parameters(theta);
    worst = std::max(worst, (grad - numeric).norm() / std::max(numeric.norm(), 1e-12));
  }
  return {worst < kGradientTolerance, fmt("max relative error %.3g over 10 instances", worst)};
}

Outcome decomposition_identity() {
  Rng rng(10);
  double worst_identity = 0.0, worst_season = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const int period = 2 + static_cast<int>(rng.index(47));
    const auto p = static_cast<std::size_t>(period);
    const std::size_t n = 2 * p + rng.index(500);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = 0.01 * static_cast<double>(i) + std::sin(i * 0.7) + rng.normal();
    const auto d = decompose(v, period);
    for (std::size_t i = 0; i < n; ++i) {
      worst_identity = std::max(worst_identity, std::abs(d.level + d.trend[i] + d.seasonal[i] + d.residual[i] - v[i]));
    }
    for (std::size_t start = 0; start + p <= n; start += p) {
      double sum = 0.0;
      for (std::size_t k = 0; k < p; ++k) sum += d.seasonal[start + k];
      worst_season = std::max(worst_season, std::abs(sum));
    }
  }
  return {worst_identity <= kIdentityTolerance && worst_season <= kIdentityTolerance,
          fmt("identity error %.3g, seasonal period-sum %.3g", worst_identity, worst_season)};
}

int run_shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  testsupport::TempDir dir("accept-cli");
  const auto ds = testsupport::synthetic_series(9, 1000, 10);
  std::ostringstream csv;
  csv << "timestamp,value\n";
  for (std::size_t i = 0; i < ds.size(); ++i) csv << ds.timestamps()[i] << ',' << format_double(ds.values()[i]) << '\n';
  testsupport::write_file(dir / "s.csv", csv.str());
  nlohmann::json labels;
  for (const auto& w : ds.windows()) labels["s"].push_back({w.start, w.end});
  testsupport::write_file(dir / "labels.json", labels.dump());

  const auto q = [&](const std::string& leaf) { return "'" + (dir / leaf).string() + "'"; };
  const std::string base = "'" + std::string(ODSEARCH_CLI) + "' --store " + q("store") + " ";
  if (run_shell(base + "ingest --name s --csv " + q("s.csv") + " --labels " + q("labels.json") + " > /dev/null") != 0) {
    return {false, "ingest failed"};
  }
  for (const char* tag : {"1", "2"}) {
    const std::string cmd = base + "search --dataset s --seed 7 --budget 30 --trace " + q(std::string("t") + tag + ".jsonl") +
                            " --policy-out " + q(std::string("p") + tag + ".json") + " > /dev/null";
    if (run_shell(cmd) != 0) return {false, "search failed"};
  }
  const bool trace = testsupport::read_file(dir / "t1.jsonl") == testsupport::read_file(dir / "t2.jsonl");
  const bool policy = testsupport::read_file(dir / "p1.json") == testsupport::read_file(dir / "p2.json");
  return {trace && policy, std::string("trace ") + (trace ? "identical" : "differs") + ", policy " +
                               (policy ? "identical" : "differs")};
}

Outcome store_round_trip() {
  const std::filesystem::path data = ODSEARCH_TEST_DATA;
  testsupport::TempDir dir("accept-store");
  auto store = Store::connect(dir / "store");
  const auto meta = store.ingest_csv("nab_format_sample", data / "nab_format_sample.csv", data / "nab_format_labels.json");
  const auto back = Store::connect(dir / "store").query_data("nab_format_sample", meta.t_min, meta.t_max);

  std::istringstream in(testsupport::read_file(data / "nab_format_sample.csv"));
  std::string line;
  std::getline(in, line);
  std::size_t i = 0, mismatches = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    double v = 0.0;
    std::from_chars(line.data() + comma + 1, line.data() + line.size(), v);
    const auto ts = parse_timestamp(line.substr(0, comma));
    if (i >= back.size() || !ts || back.timestamps()[i] != *ts ||
        std::memcmp(&back.values()[i], &v, sizeof(double)) != 0) {
      ++mismatches;
    }
    ++i;
  }
  const bool sizes = i == back.size();
  return {sizes && mismatches == 0, fmt("%zu rows, %zu mismatches", back.size(), mismatches)};
}

}  // namespace

int main(int argc, char** argv) {
  // Usage: acceptance [--known-failure N]... [N]...
  // Bare numbers restrict the run; known failures still print FAIL but do not
  // change the exit status.
  std::vector<std::size_t> only, known;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failure" && i + 1 < argc) {
      known.push_back(static_cast<std::size_t>(std::atoi(argv[++i])));
    } else {
      only.push_back(static_cast<std::size_t>(std::atoi(arg.c_str())));
    }
  }
  const auto listed = [](const std::vector<std::size_t>& v, std::size_t n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  };
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"guided search matches or beats random search", guided_beats_random},
      {"NAB perfect/null calibration", nab_calibration},
      {"KNN/LOF/HBOS agree with brute-force oracles", detector_oracles},
      {"every detector ranks a 10 sigma point in the top 2%", detectors_rank_outlier},
      {"CMA-ES solves the 3-d sphere", cmaes_sphere},
      {"density-ratio selection lands in the good region", ei_selection},
      {"autoencoder gradient matches finite differences", autoencoder_gradient},
      {"decomposition identity and zero-sum seasonal", decomposition_identity},
      {"CLI search is byte-for-byte reproducible", cli_determinism},
      {"store round-trip is bit-exact", store_round_trip},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !listed(only, i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const bool known_failure = listed(known, i + 1);
    failures += !o.pass && !known_failure;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " (" << o.detail
              << ")" << (!o.pass && known_failure ? " [known failure]" : "") << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
