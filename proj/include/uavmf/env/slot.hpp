#pragma once

#include <span>

#include "uavmf/env/energy.hpp"
#include "uavmf/env/spaces.hpp"

namespace uavmf::env {

struct SlotOutcome {
  Mode mode = Mode::kHover;
  double rate_bits = 0.0;
  double e_total = 0.0;
  double harvest = 0.0;
  double ee = 0.0;  // bits / J
  double reward = 0.0;
  double sinr1 = 0.0;
  double sinr2 = 0.0;
  double interference_penalty = 0.0;
  double energy_penalty = 0.0;
  double power_w = 0.0;
  bool substituted = false;  // infeasible action replaced by the null action
};

struct RewardTerms {
  double value = 0.0;
  double interference_penalty = 0.0;
  double energy_penalty = 0.0;
};

// EE minus the radiated power-time charge minus the energy-alarm charge.
RewardTerms reward(double ee, double power_w, Mode mode, double e, double e_total,
                   const RewardParams& params, double e_min, double tau1, double tau2);

// Flight speed between two hover points of the same cell, capped.
double flight_speed(const PhysicsConfig& phys, int from, int to);

double action_energy(const PhysicsConfig& phys, const AgentState& s, const AgentAction& a);

// Canonical actions whose slot energy fits in the battery. Falls back to the
// null action alone when nothing fits.
ActionMask feasible_mask(const PhysicsConfig& phys, const ActionSpace& actions,
                         const AgentState& s);

// True when the UAV radiates during the given phase (x * delta * p > 0, and
// phi = 1 for the first phase).
bool radiates(const AgentState& s, const AgentAction& a, int phase);

// Evaluates one agent's slot from already-sampled link gains. Interferer
// lists are phase specific.
SlotOutcome evaluate_slot(const PhysicsConfig& phys, const AgentState& s, const AgentAction& a,
                          double own_gain, std::span<const Interferer> phase1,
                          std::span<const Interferer> phase2, double cloud_m);

}  // namespace uavmf::env
