#include "support.hpp"

#include <set>

#include "odsearch/search_space.hpp"

using namespace odsearch;

namespace {

std::set<std::string> keys_of(const auto& m) {
  std::set<std::string> out;
  for (const auto& [k, v] : m) out.insert(k);
  return out;
}

}  // namespace

TEST_CASE("default space layout") {
  const auto space = default_space();
  REQUIRE(space.algorithms.size() == 8);
  std::set<Algorithm> ids;
  for (const auto& a : space.algorithms) ids.insert(a.id);
  CHECK(ids.size() == 8);

  REQUIRE(space.shared_continuous.size() == 1);
  CHECK(space.shared_continuous[0].name == kContaminationParam);
  CHECK(space.shared_continuous[0].low == 0.001);
  CHECK(space.shared_continuous[0].high == 0.25);
  CHECK(space.shared_continuous[0].scale == Scale::kLog);
  REQUIRE(space.shared_discrete.size() == 1);
  CHECK(space.shared_discrete[0].choices == std::vector<std::int64_t>{1, 5, 10, 20});

  for (const auto& a : space.algorithms) {
    for (const auto& d : a.continuous) CHECK(d.low < d.high);
    for (const auto& d : a.discrete) CHECK_FALSE(d.choices.empty());
  }
  const auto knn_k = space.spec(Algorithm::kKnn).discrete.front();
  CHECK(knn_k.name == "k");
  CHECK(knn_k.choices.front() == 1);
  CHECK(knn_k.choices.back() == 50);
  CHECK(space.spec(Algorithm::kLof).discrete.front().choices.front() == 2);
  const auto ae = space.continuous_domains(Algorithm::kAutoencoder);
  REQUIRE(ae.size() == 2);
  CHECK(ae[0].name == "lr");
  CHECK(ae[1].name == kContaminationParam);
}

TEST_CASE("sample_uniform is deterministic, valid and balanced") {
  const auto space = default_space();
  Rng a(42), b(42);
  CHECK(sample_uniform(space, a) == sample_uniform(space, b));

  Rng rng(7);
  std::map<Algorithm, int> freq;
  for (int i = 0; i < 10000; ++i) {
    const auto p = sample_uniform(space, rng);
    ++freq[p.algorithm];
    const auto problems = validate(space, p);
    CHECK_MESSAGE(problems.empty(), problems.front());
    // conditional structure: exactly the algorithm's and the shared parameters
    std::set<std::string> want_d, want_c;
    for (const auto& d : space.discrete_domains(p.algorithm)) want_d.insert(d.name);
    for (const auto& d : space.continuous_domains(p.algorithm)) want_c.insert(d.name);
    CHECK(keys_of(p.discrete) == want_d);
    CHECK(keys_of(p.continuous) == want_c);
  }
  for (const auto& [alg, n] : freq) {
    CHECK(n >= 1050);
    CHECK(n <= 1450);
  }
}

TEST_CASE("validate reports violations") {
  const auto space = default_space();
  PipelinePolicy p{Algorithm::kKnn, {{"k", 51}, {"method", 0}, {kWindowParam, 5}}, {{kContaminationParam, 0.05}}, 0};
  auto problems = validate(space, p);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("k out of domain") != std::string::npos);

  p.discrete["k"] = 5;
  CHECK(validate(space, p).empty());
  p.continuous[kContaminationParam] = 0.3;
  CHECK(validate(space, p).size() == 1);
  p.continuous[kContaminationParam] = 0.05;
  p.continuous["alpha"] = 0.1;  // foreign parameter
  CHECK(validate(space, p).size() == 1);
  p.continuous.erase("alpha");
  p.discrete.erase(kWindowParam);
  CHECK(validate(space, p).size() == 1);
  p.discrete[kWindowParam] = 7;
  CHECK(validate(space, p).size() == 1);
}

TEST_CASE("continuous codes") {
  const ContinuousDomain lr{"lr", 1e-4, 1e-1, Scale::kLog};
  CHECK(lr.decode(0.5) == doctest::Approx(std::pow(10.0, -2.5)).epsilon(1e-12));
  CHECK(lr.decode(0.0) == 1e-4);
  CHECK(lr.decode(1.0) == 1e-1);
  CHECK(lr.decode(1.7) == 1e-1);
  CHECK(lr.decode(-3.0) == 1e-4);
  const ContinuousDomain lin{"x", 0.5, 1.0, Scale::kLinear};
  CHECK(lin.decode(0.5) == 0.75);
  CHECK(lin.encode(0.75) == 0.5);

  const auto space = default_space();
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const auto p = sample_uniform(space, rng);
    const auto code = encode_continuous(space, p);
    CHECK(code.size() == space.continuous_domains(p.algorithm).size());
    for (const double c : code) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
    const auto back = decode_continuous(space, p.algorithm, code);
    REQUIRE(back.size() == p.continuous.size());
    for (const auto& [name, value] : p.continuous) CHECK(std::abs(back.at(name) - value) <= 1e-12 * std::max(1.0, std::abs(value)));
  }
  CHECK_THROWS_CODE(decode_continuous(space, Algorithm::kKnn, std::vector<double>{0.1, 0.2}), ErrorCode::kDimensionMismatch);
}

TEST_CASE("detector_config keeps only detector parameters") {
  const PipelinePolicy p{Algorithm::kHbos, {{"n_bins", 10}, {kWindowParam, 5}},
                         {{"alpha", 0.1}, {kContaminationParam, 0.05}}, 9};
  const auto cfg = detector_config(p);
  CHECK(cfg.algorithm == Algorithm::kHbos);
  CHECK(keys_of(cfg.discrete) == std::set<std::string>{"n_bins"});
  CHECK(keys_of(cfg.continuous) == std::set<std::string>{"alpha"});
  CHECK(cfg.seed == 9);
}

TEST_CASE("policy JSON round trip") {
  const auto space = default_space();
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    auto p = sample_uniform(space, rng);
    p.seed = rng.next() & 0xffffffffULL;
    const auto doc = policy_to_json(p);
    CHECK(doc["algorithm"] == std::string(algorithm_name(p.algorithm)));
    CHECK(policy_from_json(nlohmann::json::parse(doc.dump())) == p);
  }
  CHECK_THROWS_CODE(policy_from_json(nlohmann::json::parse(R"({"algorithm":"NOPE","discrete":{},"continuous":{},"seed":0})")),
                    ErrorCode::kParseError);
  CHECK_THROWS_CODE(policy_from_json(nlohmann::json::parse(R"([1,2])")), ErrorCode::kParseError);
  CHECK_THROWS_CODE(policy_from_json(nlohmann::json::parse(R"({"algorithm":"KNN","discrete":{"k":"x"},"continuous":{},"seed":0})")),
                    ErrorCode::kParseError);
}
