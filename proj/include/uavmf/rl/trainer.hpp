#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "uavmf/rl/adam.hpp"
#include "uavmf/rl/environment.hpp"
#include "uavmf/rl/mlp.hpp"
#include "uavmf/rl/policy.hpp"
#include "uavmf/rl/replay.hpp"

namespace uavmf::rl {

// Linear anneal from `start` to `end` over the first `fraction` of the
// training horizon, constant afterwards.
struct Schedule {
  double start = 0.5;
  double end = 0.5;
  double fraction = 1.0;

  double at(std::int64_t step, std::int64_t horizon) const;
};

struct TrainerConfig {
  double gamma = 0.9;
  double learning_rate = 0.005;
  int minibatch = 300;
  int replay_capacity = 1000;
  int target_period = 100;  // gradient steps between hard target copies
  int steps_per_episode = 100;
  // Rewards are multiplied by this before entering the TD target so that Q
  // values stay O(10) for the default constants.
  double reward_scale = 1e-3;
  std::vector<int> hidden = {128, 64};
  int learning_starts = 0;  // 0: start once a full minibatch is stored
  double divergence_factor = 10.0;
  int divergence_warmup = 500;  // updates before the reference loss is frozen
};

enum class Exploration { kSoft, kEpsilonGreedy, kBoltzmann };

// What distinguishes the learners: how actions are explored and which
// Bellman target is regressed. The schedule drives the entropy weight,
// epsilon or temperature.
struct LearnerRule {
  Exploration exploration = Exploration::kSoft;
  TargetKind target = TargetKind::kSoft;
  Schedule schedule;
};

struct EpisodeStats {
  int episode = 0;
  double mean_reward = 0.0;
  double mean_ee = 0.0;
  double mean_penalty = 0.0;
  double flying_probability = 0.0;
  double mean_power_w = 0.0;
  double mean_loss = 0.0;
  int steps = 0;
};

class DqnTrainer {
 public:
  DqnTrainer(int feature_width, int num_actions, TrainerConfig config, LearnerRule rule,
             std::uint64_t seed);

  // Total number of environment steps the schedules anneal over.
  void set_horizon(std::int64_t steps) { horizon_ = steps; }

  std::vector<EpisodeStats> train(Environment& env, int episodes, int meanfield_tag = 0);

  double schedule_value() const { return rule_.schedule.at(global_step_, horizon_); }

  // Behaviour policy at the current schedule value.
  Policy behaviour_policy() const;
  // The learner's answer to the frozen mean-field: the soft policy for the
  // entropy-regularised learner, greedy for the others.
  Policy final_policy() const;
  Policy greedy_policy() const;

  void flush_buffer() { buffer_.clear(); }
  void reinitialize();

  const Mlp& network() const { return *net_; }
  const Mlp& target_network() const { return target_; }
  const TrainerConfig& config() const { return config_; }
  const LearnerRule& rule() const { return rule_; }
  std::int64_t global_step() const { return global_step_; }
  std::int64_t updates() const { return updates_; }
  const ReplayBuffer& buffer() const { return buffer_; }

  void save(std::ostream& out) const;
  void load(std::istream& in);

 private:
  int select_action(std::span<const double> q, const ActionMask& mask);
  double update();

  int feature_width_;
  int num_actions_;
  TrainerConfig config_;
  LearnerRule rule_;
  std::uint64_t seed_;
  Rng rng_;
  std::shared_ptr<Mlp> net_;
  Mlp target_;
  Adam adam_;
  ReplayBuffer buffer_;
  std::int64_t horizon_ = 1;
  std::int64_t global_step_ = 0;
  std::int64_t updates_ = 0;
  int episodes_done_ = 0;
  double loss_ema_ = 0.0;
  double loss_reference_ = 0.0;
};

// Trains a fresh entropy-regularised learner on `env` (whose mean-field is
// frozen) and returns its soft policy.
Policy train_best_response(Environment& env, int episodes, const TrainerConfig& config,
                           const Schedule& entropy, std::uint64_t seed);

}  // namespace uavmf::rl
