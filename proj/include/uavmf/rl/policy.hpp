#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "uavmf/rl/mlp.hpp"
#include "uavmf/rl/softq.hpp"

namespace uavmf::rl {

enum class PolicyKind { kSoft, kGreedy, kEpsilonGreedy, kBoltzmann };

std::string to_string(PolicyKind kind);

// Frozen action-selection rule over a snapshot of a Q-network. `param` is
// the entropy weight, epsilon or temperature depending on `kind`.
struct Policy {
  std::shared_ptr<const Mlp> net;
  PolicyKind kind = PolicyKind::kGreedy;
  double param = 0.0;

  std::vector<double> q_values(std::span<const double> features) const;
  std::vector<double> probabilities(std::span<const double> q, const ActionMask& mask) const;
  int act_on_q(std::span<const double> q, const ActionMask& mask, Rng& rng) const;
  int act(std::span<const double> features, const ActionMask& mask, Rng& rng) const;
  int greedy(std::span<const double> features, const ActionMask& mask) const;
};

}  // namespace uavmf::rl
