#include "odsearch/eda.hpp"

#include "odsearch/error.hpp"

namespace odsearch {

Categorical Categorical::uniform(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "categorical needs at least one category");
  Categorical c;
  c.weights_.assign(k, 1.0 / static_cast<double>(k));
  return c;
}

Categorical Categorical::smoothed(std::span<const std::size_t> counts, double epsilon) {
  if (counts.empty()) throw Error(ErrorCode::kInvalidArgument, "categorical needs at least one category");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::kInvalidArgument, "smoothing epsilon must be positive");
  std::size_t total = 0;
  for (const auto n : counts) total += n;
  const double denom = static_cast<double>(total) + static_cast<double>(counts.size()) * epsilon;
  Categorical c;
  c.weights_.reserve(counts.size());
  for (const auto n : counts) c.weights_.push_back((static_cast<double>(n) + epsilon) / denom);
  return c;
}

std::size_t Categorical::sample(Rng& rng) const {
  double u = rng.uniform();
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    u -= weights_[i];
    if (u < 0.0) return i;
  }
  return weights_.size() - 1;
}

EdaState eda_initial(const SearchSpace& space) {
  EdaState state{Categorical::uniform(space.algorithms.size()), {}};
  for (const auto& spec : space.algorithms) {
    auto& dists = state.parameters[spec.id];
    for (const auto& d : space.discrete_domains(spec.id)) dists.push_back(Categorical::uniform(d.choices.size()));
  }
  return state;
}

EdaState eda_update(const SearchSpace& space, std::span<const TrialRecord> good, double epsilon) {
  std::vector<std::size_t> algo_counts(space.algorithms.size(), 0);
  for (const auto& t : good) {
    for (std::size_t i = 0; i < space.algorithms.size(); ++i) {
      if (space.algorithms[i].id == t.policy.algorithm) ++algo_counts[i];
    }
  }
  EdaState state{Categorical::smoothed(algo_counts, epsilon), {}};
  for (const auto& spec : space.algorithms) {
    auto& dists = state.parameters[spec.id];
    for (const auto& d : space.discrete_domains(spec.id)) {
      std::vector<std::size_t> counts(d.choices.size(), 0);
      for (const auto& t : good) {
        if (t.policy.algorithm != spec.id) continue;
        const auto it = t.policy.discrete.find(d.name);
        if (it == t.policy.discrete.end()) continue;
        const auto pos = d.index_of(it->second);
        if (pos >= 0) ++counts[static_cast<std::size_t>(pos)];
      }
      dists.push_back(Categorical::smoothed(counts, epsilon));
    }
  }
  return state;
}

Algorithm eda_propose_algorithm(const SearchSpace& space, const EdaState& state, Rng& rng) {
  return space.algorithms.at(state.algorithms.sample(rng)).id;
}

std::map<std::string, std::int64_t> eda_propose(const SearchSpace& space, const EdaState& state,
                                                Algorithm algorithm, Rng& rng) {
  const auto it = state.parameters.find(algorithm);
  if (it == state.parameters.end()) {
    throw Error(ErrorCode::kInvalidArgument, "EDA state does not cover " + std::string(algorithm_name(algorithm)));
  }
  const auto domains = space.discrete_domains(algorithm);
  std::map<std::string, std::int64_t> out;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    out[domains[i].name] = domains[i].choices.at(it->second.at(i).sample(rng));
  }
  return out;
}

}  // namespace odsearch
