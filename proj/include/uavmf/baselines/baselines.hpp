#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavmf/baselines/exploration.hpp"
#include "uavmf/mfg/equilibrium.hpp"
#include "uavmf/rl/trainer.hpp"

namespace uavmf::baselines {

enum class Algorithm { kMeMfdqn, kBoltzMfdqn, kEgMfdqn, kEgIdqn };

std::string to_string(Algorithm a);
// Accepts the legend names (ME-MFDQN, BOLTZ-MFDQN, EG-MFDQN, EG-IDQN).
Algorithm parse_algorithm(const std::string& s);
const std::vector<Algorithm>& all_algorithms();

struct BaselineConfig {
  rl::Schedule epsilon{1.0, 0.05, 0.3};
  rl::Schedule temperature{1.0, 0.1, 1.0};
  rl::Schedule entropy{0.5, 0.5, 1.0};  // ME-MFDQN only
  rl::FeatureMode meanfield_features = rl::FeatureMode::kCompact;

  // Throws std::invalid_argument for epsilon outside [0,1] or a
  // non-positive temperature.
  void validate() const;
};

// Exploration rule, Bellman target, features and propagation policy of
// each algorithm. The independent learner sees no mean-field features and
// its population is propagated with the exploring policy.
mfg::LearnerSetup learner_setup(Algorithm algorithm, const BaselineConfig& config);

// Trains one of the benchmark learners against `env` and returns the greedy
// policy.
rl::Policy train_baseline(Algorithm algorithm, rl::Environment& env, int episodes,
                          const rl::TrainerConfig& trainer, const BaselineConfig& config,
                          std::uint64_t seed);

}  // namespace uavmf::baselines
