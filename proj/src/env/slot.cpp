#include "uavmf/env/slot.hpp"

#include <algorithm>

namespace uavmf::env {

RewardTerms reward(double ee, double power_w, Mode mode, double e, double e_total,
                   const RewardParams& params, double e_min, double tau1, double tau2) {
  RewardTerms t;
  const double phi = mode == Mode::kHover ? 1.0 : 0.0;
  t.interference_penalty = params.sigma * power_w * (phi * tau1 + tau2);
  t.energy_penalty = params.xi * std::max(e_total + e_min - e, 0.0);
  t.value = ee - t.interference_penalty - t.energy_penalty;
  return t;
}

double flight_speed(const PhysicsConfig& phys, int from, int to) {
  const double v = phys.geometry.hover_distance(from, to) / phys.link.tau1;
  return std::min(v, phys.energy.max_speed);
}

double action_energy(const PhysicsConfig& phys, const AgentState& s, const AgentAction& a) {
  return total_energy(mode_of(s, a), phys.energy.power_levels[a.power_idx],
                      flight_speed(phys, s.prev_hover, a.hover), phys.energy, phys.link.tau1,
                      phys.link.tau2);
}

ActionMask feasible_mask(const PhysicsConfig& phys, const ActionSpace& actions,
                         const AgentState& s) {
  ActionMask mask(actions.size(), 0);
  bool any = false;
  for (int i = 0; i < actions.size(); ++i) {
    if (!actions.canonical(i)) continue;
    if (action_energy(phys, s, actions.decode(i)) <= s.battery) {
      mask[i] = 1;
      any = true;
    }
  }
  if (!any) mask[actions.null_action(s.prev_hover)] = 1;
  return mask;
}

bool radiates(const AgentState& s, const AgentAction& a, int phase) {
  if (a.power_idx == 0 || !a.assoc || !s.active(*a.assoc)) return false;
  return phase == 2 || mode_of(s, a) == Mode::kHover;
}

SlotOutcome evaluate_slot(const PhysicsConfig& phys, const AgentState& s, const AgentAction& a,
                          double own_gain, std::span<const Interferer> phase1,
                          std::span<const Interferer> phase2, double cloud_m) {
  SlotOutcome o;
  o.mode = mode_of(s, a);
  o.power_w = phys.energy.power_levels[a.power_idx];
  const bool serving = a.assoc.has_value() && s.active(*a.assoc);
  if (o.mode == Mode::kHover)
    o.sinr1 = compute_sinr(own_gain, o.power_w, serving, phase1, phys.link.noise);
  o.sinr2 = compute_sinr(own_gain, o.power_w, serving, phase2, phys.link.noise);
  o.rate_bits = achievable_rate(o.mode, o.sinr1, o.sinr2, phys.link.eta, phys.link.bandwidth,
                                phys.link.tau1, phys.link.tau2);
  o.e_total = action_energy(phys, s, a);
  o.harvest = harvest_energy(cloud_m, phys.energy, phys.link.tau);
  o.ee = o.rate_bits / o.e_total;
  const RewardTerms r = reward(o.ee, o.power_w, o.mode, s.battery, o.e_total, phys.reward,
                               phys.energy.battery_alarm, phys.link.tau1, phys.link.tau2);
  o.reward = r.value;
  o.interference_penalty = r.interference_penalty;
  o.energy_penalty = r.energy_penalty;
  return o;
}

}  // namespace uavmf::env
