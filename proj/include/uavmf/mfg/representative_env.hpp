#pragma once

#include <memory>
#include <random>
#include <vector>

#include "uavmf/env/world.hpp"
#include "uavmf/mfg/meanfield.hpp"
#include "uavmf/rl/environment.hpp"
#include "uavmf/rl/features.hpp"

namespace uavmf::mfg {

// Draws the interference-relevant behaviour of one non-representative UAV
// from a mean-field marginal.
class InterfererSampler {
 public:
  InterfererSampler() = default;
  explicit InterfererSampler(const std::vector<double>& marginal_if);

  InterferenceKey sample(int power_levels, Rng& rng) const;
  bool empty() const { return dist_.probabilities().empty(); }

 private:
  mutable std::discrete_distribution<int> dist_;
};

// Interferer lists seen by a GU in cell `rep_cell` when every other alive cell
// behaves as an independent draw from `sampler`.
void sample_meanfield_interference(const env::PhysicsConfig& phys, int rep_cell, int gu,
                                   const std::vector<std::uint8_t>& alive,
                                   const InterfererSampler& sampler, Rng& rng,
                                   std::vector<env::Interferer>& phase1,
                                   std::vector<env::Interferer>& phase2);

// The single-agent view of the game: the representative UAV sits in the
// centre cell and all other cells radiate according to a frozen mean-field.
class RepresentativeEnv : public rl::Environment {
 public:
  RepresentativeEnv(env::PhysicsConfig phys, rl::FeatureMode mode, MeanField meanfield);

  void set_meanfield(MeanField meanfield);
  // Cells flagged 0 neither interfere nor count towards the population.
  void set_alive(std::vector<std::uint8_t> alive);
  // Interference comes from this marginal; features still use the mean-field.
  void set_interference_marginal(const std::vector<double>& marginal_if);

  int num_actions() const override { return actions_.size(); }
  int feature_width() const override;
  void reset(Rng& rng) override;
  void features(std::vector<double>& out) const override;
  rl::ActionMask feasible_mask() const override;
  rl::StepInfo step(int action, Rng& rng) override;

  const env::AgentState& state() const { return state_; }
  void set_state(const env::AgentState& s) { state_ = s; }
  const env::SlotOutcome& last_outcome() const { return last_; }
  const env::AgentAction& last_action() const { return last_action_; }
  const env::PhysicsConfig& physics() const { return phys_; }
  const MeanField& meanfield() const { return meanfield_; }
  const env::StateSpace& states() const { return states_; }
  const env::ActionSpace& actions() const { return actions_; }

 private:
  env::PhysicsConfig phys_;
  env::StateSpace states_;
  env::ActionSpace actions_;
  rl::FeatureMode mode_;
  MeanField meanfield_;
  std::vector<double> mf_features_;
  InterfererSampler sampler_;
  std::vector<std::uint8_t> alive_;
  int rep_cell_;
  env::AgentState state_;
  env::SlotOutcome last_;
  env::AgentAction last_action_;
  std::vector<env::Interferer> phase1_, phase2_;
};

}  // namespace uavmf::mfg
