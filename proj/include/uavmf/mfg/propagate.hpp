#pragma once

#include <utility>
#include <vector>

#include "uavmf/env/world.hpp"
#include "uavmf/mfg/meanfield.hpp"
#include "uavmf/rl/features.hpp"
#include "uavmf/rl/policy.hpp"

namespace uavmf::mfg {

struct PropagationConfig {
  int slots = 50;         // rollout length
  int average_last = 25;  // slots at the end pooled into the histogram
};

// Every alive UAV of the grid acting by one shared policy on its own state
// and a common mean-field feature vector.
class PopulationSimulator {
 public:
  PopulationSimulator(env::PhysicsConfig phys, rl::Policy policy, rl::FeatureMode mode,
                      const MeanField& feature_meanfield);

  // Fresh world: full batteries, stationary demand.
  void reset(Rng& rng);
  // States drawn independently from the state marginal of `mf`, batteries at
  // the level midpoint.
  void reset_from(const MeanField& mf, Rng& rng);

  const env::WorldStep& step(Rng& rng);

  env::WorldState& world() { return world_; }
  const env::WorldState& world() const { return world_; }
  const env::PhysicsConfig& physics() const { return phys_; }
  int representative() const { return phys_.geometry.centre_cell(); }
  // (state, action) indices of the alive non-representative cells in the
  // last slot.
  const std::vector<std::pair<int, int>>& last_samples() const { return samples_; }
  const std::vector<int>& last_action_indices() const { return action_idx_; }

 private:
  env::PhysicsConfig phys_;
  env::StateSpace states_;
  env::ActionSpace actions_;
  rl::Policy policy_;
  rl::FeatureMode mode_;
  std::vector<double> mf_features_;
  env::WorldState world_;
  env::WorldStep last_;
  std::vector<std::pair<int, int>> samples_;
  std::vector<int> action_idx_;
};

// Empirical propagation: simulate the population under `policy` starting
// from the state marginal of `mf` and histogram the stationary window.
MeanField propagate_population(const env::PhysicsConfig& phys, const rl::Policy& policy,
                               rl::FeatureMode mode, const MeanField& mf,
                               const PropagationConfig& config, Rng& rng);

}  // namespace uavmf::mfg
