#include "support.hpp"

#include <charconv>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "odsearch/store.hpp"
#include "odsearch/timestamp.hpp"

using namespace odsearch;
using testsupport::TempDir;
using testsupport::write_file;

namespace {

const std::filesystem::path kData = ODSEARCH_TEST_DATA;

// Independent reading of the fixture: split lines by hand, parse with
// from_chars.
std::vector<std::pair<EpochMs, double>> parse_fixture(const std::filesystem::path& p) {
  std::istringstream in(testsupport::read_file(p));
  std::string line;
  std::getline(in, line);
  std::vector<std::pair<EpochMs, double>> out;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    double v = 0.0;
    std::from_chars(line.data() + comma + 1, line.data() + line.size(), v);
    out.emplace_back(*parse_timestamp(line.substr(0, comma)), v);
  }
  return out;
}

}  // namespace

TEST_CASE("connect creates an empty store") {
  TempDir dir("store");
  const auto store = Store::connect(dir / "fresh");
  CHECK(store.manifest().empty());
  CHECK(std::filesystem::is_directory(dir / "fresh"));
}

TEST_CASE("connect reports unusable roots") {
  TempDir dir("store");
  write_file(dir / "plain-file", "x");
  CHECK_THROWS_CODE(Store::connect(dir / "plain-file"), ErrorCode::kPathInaccessible);
  CHECK_THROWS_CODE(Store::connect(dir / "plain-file" / "below"), ErrorCode::kPathInaccessible);
}

TEST_CASE("connect validates the manifest") {
  TempDir dir("store");
  write_file(dir / "manifest.json", "{not json");
  CHECK_THROWS_CODE(Store::connect(dir.path()), ErrorCode::kManifestCorrupt);
  write_file(dir / "manifest.json", R"({"version":2,"datasets":{}})");
  CHECK_THROWS_CODE(Store::connect(dir.path()), ErrorCode::kVersionMismatch);
  write_file(dir / "manifest.json",
             R"({"version":1,"datasets":{"x":{"n_points":1,"t_min":0,"t_max":0,"has_labels":false,"source_file":"data/x.csv","windows":[]}}})");
  CHECK_THROWS_CODE(Store::connect(dir.path()), ErrorCode::kManifestCorrupt);
}

TEST_CASE("NAB-format fixture ingests and round-trips bit-exactly") {
  TempDir dir("store");
  auto store = Store::connect(dir.path());
  const auto meta =
      store.ingest_csv("nab_format_sample", kData / "nab_format_sample.csv", kData / "nab_format_labels.json");
  CHECK(meta.n_points == 4032);
  CHECK(meta.has_labels);
  CHECK(meta.t_min == *parse_timestamp("2014-02-14 14:30:00"));
  CHECK(meta.t_max == meta.t_min + 4031 * 300'000);

  const auto expected = parse_fixture(kData / "nab_format_sample.csv");
  const auto ds = store.query_data("nab_format_sample", meta.t_min, meta.t_max);
  REQUIRE(ds.size() == expected.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(ds.timestamps()[i] == expected[i].first);
    CHECK(std::memcmp(&ds.values()[i], &expected[i].second, sizeof(double)) == 0);
  }
  REQUIRE(ds.windows().size() == 2);
  CHECK(ds.windows()[0].start == *parse_timestamp("2014-02-19 17:50:00"));

  // reopening reproduces the manifest and the data
  const auto reopened = Store::connect(dir.path());
  CHECK(reopened.manifest().at("nab_format_sample") == meta);
  const auto again = reopened.load("nab_format_sample");
  CHECK(std::equal(again.values().begin(), again.values().end(), ds.values().begin(), ds.values().end()));
  CHECK(std::equal(again.windows().begin(), again.windows().end(), ds.windows().begin(), ds.windows().end()));

  const auto manifest = nlohmann::json::parse(testsupport::read_file(dir / "manifest.json"));
  CHECK(manifest["version"] == 1);
  CHECK(manifest["datasets"].contains("nab_format_sample"));
  CHECK_FALSE(std::filesystem::exists(dir / "manifest.json.tmp"));
}

TEST_CASE("ingest errors") {
  TempDir dir("store");
  auto store = Store::connect(dir.path());
  write_file(dir / "header.csv", "timestamp,value\n");
  CHECK_THROWS_CODE(store.ingest_csv("h", dir / "header.csv"), ErrorCode::kEmptyFile);

  write_file(dir / "bad.csv", "timestamp,value\n1,2.0\n2,abc\n");
  try {
    store.ingest_csv("b", dir / "bad.csv");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kParseError);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  write_file(dir / "header2.csv", "time,value\n1,2\n");
  CHECK_THROWS_CODE(store.ingest_csv("h2", dir / "header2.csv"), ErrorCode::kParseError);

  write_file(dir / "ok.csv", "timestamp,value\n1,2.5\n2,3.5\n");
  store.ingest_csv("ok", dir / "ok.csv");
  CHECK_THROWS_CODE(store.ingest_csv("ok", dir / "ok.csv"), ErrorCode::kDuplicateName);
  CHECK_THROWS_CODE(store.ingest_csv("../escape", dir / "ok.csv"), ErrorCode::kInvalidName);
  CHECK_THROWS_CODE(store.ingest_csv("", dir / "ok.csv"), ErrorCode::kInvalidName);

  write_file(dir / "nonmono.csv", "timestamp,value\n2,1\n1,1\n");
  CHECK_THROWS_CODE(store.ingest_csv("nm", dir / "nonmono.csv"), ErrorCode::kNonMonotonicTimestamps);
  // failed ingests leave nothing behind
  CHECK(store.manifest().size() == 1);
  CHECK(Store::connect(dir.path()).manifest().size() == 1);
}

TEST_CASE("query_data ranges") {
  TempDir dir("store");
  auto store = Store::connect(dir.path());
  write_file(dir / "s.csv", "timestamp,value\n10,1\n20,2\n30,3\n40,4\n50,5\n");
  write_file(dir / "labels.json", R"({"s.csv": [[20, 30]]})");
  store.ingest_csv("s", dir / "s.csv", dir / "labels.json");

  CHECK(store.query_data("s", 10, 50).size() == 5);
  CHECK(store.query_data("s", 0, 5).empty());
  CHECK(store.query_data("s", 0, 5).windows().empty());
  const auto part = store.query_data("s", 25, 45);
  CHECK(part.size() == 2);
  REQUIRE(part.windows().size() == 1);
  CHECK(part.windows()[0] == AnomalyWindow{30, 30});

  // adjacent disjoint ranges partition the full result
  const auto left = store.query_data("s", 10, 30);
  const auto right = store.query_data("s", 31, 50);
  CHECK(left.size() + right.size() == 5);

  CHECK_THROWS_CODE(store.query_data("missing", 0, 1), ErrorCode::kUnknownDataset);
  CHECK_THROWS_CODE(store.query_data("s", 5, 4), ErrorCode::kInvalidRange);
}

TEST_CASE("labels lookup by exact key and by stem") {
  TempDir dir("store");
  write_file(dir / "labels.json",
             R"({"realKnownCause/nyc_taxi.csv": [["2014-11-01 19:00:00.000000", "2014-11-02 01:00:00.000000"]],
                 "other": [[5, 6], [1, 2]]})");
  const auto taxi = read_label_windows(dir / "labels.json", "nyc_taxi");
  REQUIRE(taxi.size() == 1);
  CHECK(taxi[0].start == *parse_timestamp("2014-11-01 19:00:00"));
  const auto other = read_label_windows(dir / "labels.json", "other");
  REQUIRE(other.size() == 2);
  CHECK(other[0] == AnomalyWindow{1, 2});
  CHECK_THROWS_CODE(read_label_windows(dir / "labels.json", "absent"), ErrorCode::kParseError);
}

TEST_CASE("format_double round-trips") {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.index(200)) - 100);
    const std::string text = format_double(v);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(std::memcmp(&back, &v, sizeof v) == 0);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(59.0) == "59");
}
