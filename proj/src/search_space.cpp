#include "odsearch/search_space.hpp"

#include <algorithm>
#include <cmath>

#include "odsearch/error.hpp"

namespace odsearch {
namespace {

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (auto v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

double ContinuousDomain::decode(double code) const {
  code = std::clamp(code, 0.0, 1.0);
  if (code == 0.0) return low;
  if (code == 1.0) return high;
  if (scale == Scale::kLog) {
    const double l = std::log(low);
    return std::clamp(std::exp(l + code * (std::log(high) - l)), low, high);
  }
  return std::clamp(low + code * (high - low), low, high);
}

double ContinuousDomain::encode(double value) const {
  if (scale == Scale::kLog) {
    const double l = std::log(low);
    return std::clamp((std::log(value) - l) / (std::log(high) - l), 0.0, 1.0);
  }
  return std::clamp((value - low) / (high - low), 0.0, 1.0);
}

bool DiscreteDomain::contains(std::int64_t v) const { return index_of(v) >= 0; }

std::ptrdiff_t DiscreteDomain::index_of(std::int64_t v) const {
  const auto it = std::find(choices.begin(), choices.end(), v);
  return it == choices.end() ? -1 : it - choices.begin();
}

const AlgorithmSpec& SearchSpace::spec(Algorithm a) const {
  for (const auto& s : algorithms) {
    if (s.id == a) return s;
  }
  throw Error(ErrorCode::kInvalidArgument, std::string(algorithm_name(a)) + " is not in the search space");
}

std::vector<DiscreteDomain> SearchSpace::discrete_domains(Algorithm a) const {
  auto out = spec(a).discrete;
  out.insert(out.end(), shared_discrete.begin(), shared_discrete.end());
  return out;
}

std::vector<ContinuousDomain> SearchSpace::continuous_domains(Algorithm a) const {
  auto out = spec(a).continuous;
  out.insert(out.end(), shared_continuous.begin(), shared_continuous.end());
  return out;
}

SearchSpace default_space() {
  SearchSpace s;
  s.algorithms = {
      {Algorithm::kKnn, {{"k", range(1, 50)}, {"method", {0, 1, 2}}}, {}},
      {Algorithm::kLof, {{"k", range(2, 50)}}, {}},
      {Algorithm::kHbos, {{"n_bins", range(5, 100)}}, {{"alpha", 0.01, 0.5, Scale::kLinear}}},
      {Algorithm::kIforest, {{"n_trees", range(10, 200)}, {"subsample", {32, 64, 128, 256}}}, {}},
      {Algorithm::kPca, {}, {{"variance_fraction", 0.5, 1.0, Scale::kLinear}}},
      {Algorithm::kCblof,
       {{"n_clusters", range(2, 20)}},
       {{"alpha", 0.5, 0.99, Scale::kLinear}, {"beta", 1.01, 20.0, Scale::kLog}}},
      {Algorithm::kRobustCov, {}, {{"support_fraction", 0.5, 1.0, Scale::kLinear}}},
      {Algorithm::kAutoencoder,
       {{"hidden", range(2, 32)}, {"epochs", {50, 100, 200}}},
       {{"lr", 1e-4, 1e-1, Scale::kLog}}},
  };
  s.shared_continuous = {{kContaminationParam, 0.001, 0.25, Scale::kLog}};
  s.shared_discrete = {{kWindowParam, {1, 5, 10, 20}}};
  return s;
}

PipelinePolicy sample_uniform(const SearchSpace& space, Rng& rng) {
  PipelinePolicy p;
  p.algorithm = space.algorithms[rng.index(space.algorithms.size())].id;
  for (const auto& d : space.discrete_domains(p.algorithm)) {
    p.discrete[d.name] = d.choices[rng.index(d.choices.size())];
  }
  for (const auto& c : space.continuous_domains(p.algorithm)) {
    p.continuous[c.name] = c.decode(rng.uniform());
  }
  p.seed = rng.next() & 0xffffffffULL;
  return p;
}

std::vector<std::string> validate(const SearchSpace& space, const PipelinePolicy& policy) {
  std::vector<std::string> violations;
  const bool known = std::any_of(space.algorithms.begin(), space.algorithms.end(),
                                 [&](const AlgorithmSpec& s) { return s.id == policy.algorithm; });
  if (!known) return {std::string(algorithm_name(policy.algorithm)) + " is not in the search space"};

  const auto discrete = space.discrete_domains(policy.algorithm);
  const auto continuous = space.continuous_domains(policy.algorithm);
  for (const auto& d : discrete) {
    const auto it = policy.discrete.find(d.name);
    if (it == policy.discrete.end()) {
      violations.push_back(d.name + " missing");
    } else if (!d.contains(it->second)) {
      violations.push_back(d.name + " out of domain (" + std::to_string(it->second) + ")");
    }
  }
  for (const auto& c : continuous) {
    const auto it = policy.continuous.find(c.name);
    if (it == policy.continuous.end()) {
      violations.push_back(c.name + " missing");
    } else if (!std::isfinite(it->second) || !c.contains(it->second)) {
      violations.push_back(c.name + " out of domain (" + format_value(it->second) + ")");
    }
  }
  for (const auto& [name, value] : policy.discrete) {
    if (std::none_of(discrete.begin(), discrete.end(), [&](const DiscreteDomain& d) { return d.name == name; })) {
      violations.push_back(name + " is not a discrete parameter of " +
                           std::string(algorithm_name(policy.algorithm)));
    }
  }
  for (const auto& [name, value] : policy.continuous) {
    if (std::none_of(continuous.begin(), continuous.end(),
                     [&](const ContinuousDomain& c) { return c.name == name; })) {
      violations.push_back(name + " is not a continuous parameter of " +
                           std::string(algorithm_name(policy.algorithm)));
    }
  }
  return violations;
}

std::vector<double> encode_continuous(const SearchSpace& space, const PipelinePolicy& policy) {
  std::vector<double> code;
  for (const auto& c : space.continuous_domains(policy.algorithm)) {
    const auto it = policy.continuous.find(c.name);
    if (it == policy.continuous.end()) throw Error(ErrorCode::kDimensionMismatch, c.name + " missing");
    code.push_back(c.encode(it->second));
  }
  return code;
}

std::map<std::string, double> decode_continuous(const SearchSpace& space, Algorithm algorithm,
                                                std::span<const double> code) {
  const auto domains = space.continuous_domains(algorithm);
  if (code.size() != domains.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "code has " + std::to_string(code.size()) + " entries, " +
                                                   std::string(algorithm_name(algorithm)) + " needs " +
                                                   std::to_string(domains.size()));
  }
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < domains.size(); ++i) out[domains[i].name] = domains[i].decode(code[i]);
  return out;
}

DetectorConfig detector_config(const PipelinePolicy& policy) {
  DetectorConfig cfg{policy.algorithm, policy.discrete, policy.continuous, policy.seed};
  cfg.discrete.erase(kWindowParam);
  cfg.continuous.erase(kContaminationParam);
  return cfg;
}

nlohmann::json policy_to_json(const PipelinePolicy& policy) {
  nlohmann::json discrete = nlohmann::json::object();
  for (const auto& [k, v] : policy.discrete) discrete[k] = v;
  nlohmann::json continuous = nlohmann::json::object();
  for (const auto& [k, v] : policy.continuous) continuous[k] = v;
  return {{"algorithm", algorithm_name(policy.algorithm)},
          {"discrete", discrete},
          {"continuous", continuous},
          {"seed", policy.seed}};
}

PipelinePolicy policy_from_json(const nlohmann::json& doc) {
  try {
    PipelinePolicy p;
    const auto algo = parse_algorithm(doc.at("algorithm").get<std::string>());
    if (!algo) throw Error(ErrorCode::kParseError, "unknown algorithm " + doc.at("algorithm").dump());
    p.algorithm = *algo;
    for (const auto& [k, v] : doc.at("discrete").items()) {
      if (!v.is_number_integer()) throw Error(ErrorCode::kParseError, "discrete " + k + " is not an integer");
      p.discrete[k] = v.get<std::int64_t>();
    }
    for (const auto& [k, v] : doc.at("continuous").items()) {
      if (!v.is_number()) throw Error(ErrorCode::kParseError, "continuous " + k + " is not a number");
      p.continuous[k] = v.get<double>();
    }
    p.seed = doc.value("seed", std::uint64_t{0});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

}  // namespace odsearch
