#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "odsearch/detectors.hpp"
#include "odsearch/rng.hpp"

namespace odsearch {

inline constexpr const char* kContaminationParam = "contamination";
inline constexpr const char* kWindowParam = "window_w";

enum class Scale { kLinear, kLog };

struct ContinuousDomain {
  std::string name;
  double low = 0.0;
  double high = 1.0;
  Scale scale = Scale::kLinear;

  /// Unit-interval code to value; codes outside [0, 1] are clamped first and
  /// the endpoints map to low/high exactly.
  double decode(double code) const;
  double encode(double value) const;
  bool contains(double value) const { return value >= low && value <= high; }
};

struct DiscreteDomain {
  std::string name;
  std::vector<std::int64_t> choices;

  bool contains(std::int64_t v) const;
  /// Position of v in choices, or -1.
  std::ptrdiff_t index_of(std::int64_t v) const;
};

struct AlgorithmSpec {
  Algorithm id = Algorithm::kKnn;
  std::vector<DiscreteDomain> discrete;
  std::vector<ContinuousDomain> continuous;
};

/// Conditional space: an algorithm choice, that algorithm's own domains, and
/// domains shared by every algorithm.
struct SearchSpace {
  std::vector<AlgorithmSpec> algorithms;
  std::vector<ContinuousDomain> shared_continuous;
  std::vector<DiscreteDomain> shared_discrete;

  const AlgorithmSpec& spec(Algorithm a) const;
  /// Algorithm-specific domains followed by the shared ones, in declared order.
  std::vector<DiscreteDomain> discrete_domains(Algorithm a) const;
  std::vector<ContinuousDomain> continuous_domains(Algorithm a) const;
};

struct PipelinePolicy {
  Algorithm algorithm = Algorithm::kKnn;
  std::map<std::string, std::int64_t> discrete;
  std::map<std::string, double> continuous;
  std::uint64_t seed = 0;

  double contamination() const { return continuous.at(kContaminationParam); }
  std::size_t window() const { return static_cast<std::size_t>(discrete.at(kWindowParam)); }
  friend bool operator==(const PipelinePolicy&, const PipelinePolicy&) = default;
};

/// The eight-algorithm space with contamination in [0.001, 0.25] (log) and
/// window width in {1, 5, 10, 20} shared by all.
SearchSpace default_space();

/// Algorithm, discrete values and unit-cube codes all uniform.
PipelinePolicy sample_uniform(const SearchSpace& space, Rng& rng);

/// Empty when the policy assigns exactly its algorithm's domains plus the
/// shared ones, each inside its domain.
std::vector<std::string> validate(const SearchSpace& space, const PipelinePolicy& policy);

/// Unit-cube code of the policy's continuous assignment, in
/// continuous_domains() order.
std::vector<double> encode_continuous(const SearchSpace& space, const PipelinePolicy& policy);

/// Throws kDimensionMismatch when the code length differs from the
/// algorithm's continuous dimension.
std::map<std::string, double> decode_continuous(const SearchSpace& space, Algorithm algorithm,
                                                std::span<const double> code);

/// Drops the shared parameters, which the pipeline consumes itself.
DetectorConfig detector_config(const PipelinePolicy& policy);

nlohmann::json policy_to_json(const PipelinePolicy& policy);
/// Throws Error(kParseError) on structural problems; does not validate domains.
PipelinePolicy policy_from_json(const nlohmann::json& doc);

}  // namespace odsearch
