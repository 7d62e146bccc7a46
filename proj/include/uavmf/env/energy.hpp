#pragma once

#include "uavmf/env/channel.hpp"
#include "uavmf/env/physics.hpp"

namespace uavmf::env {

// Solar energy collected over `tau` seconds under `cloud_m` metres of cloud.
double harvest_energy(double cloud_m, const EnergyParams& params, double tau);

// Rotary-wing propulsion power at forward speed v (blade profile + induced +
// parasite). propulsion_power(0) is the hover power.
double propulsion_power(double v_mps, const PropulsionParams& params);

inline double hover_power(const PropulsionParams& params) {
  return params.blade_profile_hover() + params.induced_hover();
}

// Energy drawn in one slot: flight during tau1 in mode 1, hover plus radio
// for the remaining transmit time.
double total_energy(Mode mode, double power_w, double v_mps, const EnergyParams& params,
                    double tau1, double tau2);

double step_battery(double e, double e_total, double harvest, double e_max);

// Uniform quantisation of [0, e_max] into `levels` bins.
int battery_level(double e, double e_max, int levels);

// Energy at the centre of a quantisation bin.
double battery_level_midpoint(int level, double e_max, int levels);

}  // namespace uavmf::env
