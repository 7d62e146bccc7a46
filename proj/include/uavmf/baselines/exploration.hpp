#pragma once

#include <span>
#include <vector>

#include "uavmf/core/rng.hpp"
#include "uavmf/rl/softq.hpp"

namespace uavmf::baselines {

using rl::ActionMask;

// Draws an index from a probability vector; zero-probability entries are
// never returned.
int sample_categorical(std::span<const double> probs, Rng& rng);

// With probability eps a uniform feasible action, else the feasible argmax.
int epsilon_greedy_action(std::span<const double> q, double eps, const ActionMask& mask, Rng& rng);

// Action distribution proportional to exp(q_a / T) over feasible actions.
std::vector<double> boltzmann_probabilities(std::span<const double> q, double temperature,
                                            const ActionMask& mask);
int boltzmann_action(std::span<const double> q, double temperature, const ActionMask& mask,
                     Rng& rng);

}  // namespace uavmf::baselines
