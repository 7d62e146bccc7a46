#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "uavmf/mfg/equilibrium.hpp"
#include "uavmf/pomfg/po_env.hpp"

namespace uavmf::pomfg {

struct PoSolverConfig {
  mfg::SolverConfig base;
  double coverage = 1.0;
  int staleness_cap = kDefaultStalenessCap;
};

struct PoPropagation {
  mfg::MeanField meanfield;           // true (state, action) histogram
  ObservationMeanField obs_meanfield;  // (history summary, action) histogram
};

// Population rollout where every UAV acts on its own compressed history.
PoPropagation propagate_po_population(const env::PhysicsConfig& phys, const rl::Policy& policy,
                                      double coverage, int staleness_cap,
                                      const ObservationMeanField& obs_features,
                                      const mfg::MeanField& start,
                                      const mfg::PropagationConfig& config, Rng& rng);

struct PoSolveResult {
  std::unique_ptr<rl::DqnTrainer> trainer;
  rl::Policy policy;
  std::optional<ObservationMeanField> obs_meanfield;
  std::optional<mfg::MeanField> meanfield;
  // distances are on the observation mean-field, distances_if on the
  // interference marginal of the true mean-field.
  mfg::EquilibriumReport report;
  std::vector<rl::EpisodeStats> episodes;
  std::vector<int> episode_iteration;
};

// Entropy-regularised learner trained against a frozen observation
// mean-field; returns the soft policy.
rl::Policy train_pomfg(PoEnv& env, int episodes, const rl::TrainerConfig& config,
                       const rl::Schedule& entropy, std::uint64_t seed);

// Outer fixed-point loop of the partially observable game.
void solve_pomfg(const env::PhysicsConfig& phys, const rl::LearnerRule& rule,
                 const PoSolverConfig& config, PoSolveResult& out);

}  // namespace uavmf::pomfg
