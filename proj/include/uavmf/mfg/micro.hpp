#pragma once

#include <memory>
#include <vector>

#include "uavmf/env/slot.hpp"
#include "uavmf/mfg/meanfield.hpp"
#include "uavmf/rl/environment.hpp"
#include "uavmf/rl/features.hpp"
#include "uavmf/rl/tabular.hpp"

namespace uavmf::mfg {

struct MicroConfig {
  int grid = 3;              // grid x grid cells, representative in the centre
  double cell_side = 300.0;  // m
  double power_w = 0.05;     // the single nonzero power level
  int energy_levels = 3;
  double battery_max = 9.0e4;  // J
  double sigma = 1200.0;
  double reward_scale = 1e-3;
  int fading_samples = 4000;
  std::uint64_t fading_seed = 12345;
};

// One GU per cell, powers {0, p}, a handful of energy levels: small enough
// that the representative MDP given a mean-field can be written down exactly.
// Expected rewards average the SINR indicators over a fixed pool of fading
// draws (common random numbers) and over every subset of transmitting
// neighbours, so the reward is a smooth function of the mean-field.
class MicroInstance {
 public:
  explicit MicroInstance(MicroConfig config = {});

  const MicroConfig& config() const { return config_; }
  const env::PhysicsConfig& physics() const { return phys_; }
  const env::StateSpace& states() const { return states_; }
  const env::ActionSpace& actions() const { return actions_; }
  const std::shared_ptr<const MeanFieldLayout>& layout() const { return layout_; }
  int neighbours() const { return static_cast<int>(neighbour_cells_.size()); }

  // Probability that a neighbour radiates in phase 1 and in phase 2.
  std::pair<double, double> transmit_probabilities(const MeanField& mf) const;
  // Success probabilities of the representative's two phases.
  std::pair<double, double> success_probabilities(const MeanField& mf) const;

  // Representative MDP against a frozen mean-field; rewards are scaled.
  rl::TabularMdp build_mdp(const MeanField& mf) const;

  // Battery energy used to evaluate a state.
  env::AgentState state_of(int s) const;

  // Exact one-step push-forward: mu' = sum mu pi P, then L' = mu' pi.
  // `policy` holds rows pi(.|s) of length num_actions.
  MeanField propagate_exact(const MeanField& mf, const std::vector<double>& policy) const;
  // The same map estimated from `samples` independent population draws.
  MeanField propagate_empirical(const MeanField& mf, const std::vector<double>& policy,
                                int samples, Rng& rng) const;

  // A realised unscaled reward with each neighbour radiating with the given
  // phase probabilities; its scaled mean is the MDP reward.
  double sample_reward(int s, int a, double t1, double t2, Rng& rng) const;
  int sample_next_state(int s, int a, Rng& rng) const;

 private:
  double expected_reward(const env::AgentState& st, const env::AgentAction& a, double succ1,
                         double succ2) const;
  double success_probability(double t) const;

  MicroConfig config_;
  env::PhysicsConfig phys_;
  env::StateSpace states_;
  env::ActionSpace actions_;
  std::shared_ptr<const MeanFieldLayout> layout_;
  std::vector<int> neighbour_cells_;
  std::vector<double> own_gain_;                // per fading sample
  std::vector<std::vector<double>> neigh_gain_; // per fading sample, per neighbour
  std::vector<std::vector<double>> subset_gain_; // per fading sample, per neighbour subset
  rl::TabularMdp transitions_;                  // rewards unused
};

// Sampling view of the micro MDP for the neural trainer.
class MicroEnv : public rl::Environment {
 public:
  MicroEnv(const MicroInstance& instance, MeanField meanfield, rl::FeatureMode mode);

  int num_actions() const override { return instance_.actions().size(); }
  int feature_width() const override;
  void reset(Rng& rng) override;
  void features(std::vector<double>& out) const override;
  rl::ActionMask feasible_mask() const override;
  rl::StepInfo step(int action, Rng& rng) override;

  void set_state(int s) { state_ = s; }
  int state() const { return state_; }
  void features_of(int s, std::vector<double>& out) const;

 private:
  const MicroInstance& instance_;
  MeanField meanfield_;
  rl::FeatureMode mode_;
  rl::TabularMdp mdp_;
  std::vector<double> mf_features_;
  double t1_ = 0.0;
  double t2_ = 0.0;
  int state_ = 0;
};

}  // namespace uavmf::mfg
