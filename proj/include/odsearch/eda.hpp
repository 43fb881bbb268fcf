#pragma once

#include <map>
#include <span>
#include <vector>

#include "odsearch/rng.hpp"
#include "odsearch/search_space.hpp"
#include "odsearch/trial.hpp"

namespace odsearch {

/// Distribution over K categories.
class Categorical {
 public:
  static Categorical uniform(std::size_t k);
  /// weight_i = (counts_i + epsilon) / (total + K * epsilon), total = sum of counts.
  static Categorical smoothed(std::span<const std::size_t> counts, double epsilon);

  std::size_t sample(Rng& rng) const;
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

/// Estimation-of-distribution model over the discrete block: one categorical
/// over the algorithm roster (in space order) and, per algorithm, one per
/// discrete parameter (in SearchSpace::discrete_domains order).
struct EdaState {
  Categorical algorithms;
  std::map<Algorithm, std::vector<Categorical>> parameters;
};

inline constexpr double kDefaultEdaEpsilon = 0.05;

EdaState eda_initial(const SearchSpace& space);

/// Refits every categorical from the elite trials. Parameter distributions of
/// an algorithm only count elite trials that used that algorithm.
EdaState eda_update(const SearchSpace& space, std::span<const TrialRecord> good,
                    double epsilon = kDefaultEdaEpsilon);

Algorithm eda_propose_algorithm(const SearchSpace& space, const EdaState& state, Rng& rng);

/// Independent draw for each discrete parameter of `algorithm`, shared ones
/// included.
std::map<std::string, std::int64_t> eda_propose(const SearchSpace& space, const EdaState& state,
                                                Algorithm algorithm, Rng& rng);

}  // namespace odsearch
