#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "uavmf/rl/mlp.hpp"

namespace uavmf::rl {

using ActionMask = std::vector<std::uint8_t>;

struct TrainingDiverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// phi * log sum_a exp(q_a / phi) over the unmasked actions, max-shifted.
// phi <= 0 is the hard limit max_a q_a. An empty mask means all actions.
double soft_value(std::span<const double> q, double phi, const ActionMask& mask = {});

// exp((q_a - V) / phi) restricted to the mask and renormalised. Throws
// std::invalid_argument when every action is masked.
std::vector<double> soft_policy(std::span<const double> q, double phi, const ActionMask& mask = {});

// Feasible argmax, ties to the lowest index.
int greedy_action(std::span<const double> q, const ActionMask& mask = {});

// Soft Bellman target r + gamma * V_soft(s').
double td_target(double r, std::span<const double> next_q, double gamma, double phi,
                 const ActionMask& next_mask = {});

enum class TargetKind { kSoft, kHard };

struct Minibatch {
  Eigen::MatrixXd states;       // features x n
  std::vector<int> actions;
  std::vector<double> rewards;
  Eigen::MatrixXd next_states;  // features x n
  std::vector<ActionMask> next_masks;

  int size() const { return static_cast<int>(actions.size()); }
};

struct LossGradient {
  double loss = 0.0;
  Gradients grads;
  std::vector<double> targets;
};

// Mean of 1/2 (Q(s,a) - target)^2; the target comes from `target` and is a
// constant for differentiation. kHard uses r + gamma * max_a Q~(s', a).
LossGradient loss_and_gradient(const Mlp& net, const Mlp& target, const Minibatch& batch,
                               double gamma, double phi, TargetKind kind = TargetKind::kSoft);

}  // namespace uavmf::rl
