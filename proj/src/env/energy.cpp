#include "uavmf/env/energy.hpp"

#include <algorithm>
#include <cmath>

namespace uavmf::env {

double PropulsionParams::blade_profile_hover() const {
  const double tip = blade_angular_velocity * rotor_radius;
  return profile_drag_coeff / 8.0 * air_density * rotor_solidity * rotor_area * tip * tip * tip;
}

double PropulsionParams::induced_hover() const {
  return (1.0 + induced_correction) * std::pow(weight, 1.5) /
         std::sqrt(2.0 * air_density * rotor_area);
}

double harvest_energy(double cloud_m, const EnergyParams& params, double tau) {
  return params.harvest_efficiency * params.panel_area * params.irradiance *
         std::exp(-params.cloud_absorption * cloud_m) * tau;
}

double propulsion_power(double v_mps, const PropulsionParams& params) {
  const double tip = params.blade_angular_velocity * params.rotor_radius;
  const double v2 = v_mps * v_mps;
  const double blade = params.blade_profile_hover() * (1.0 + 3.0 * v2 / (tip * tip));
  const double k = params.air_density * params.rotor_area / params.weight;
  const double induced =
      params.induced_hover() * std::sqrt(std::sqrt(1.0 + k * k * v2 * v2) - k * v2);
  const double parasite = 0.5 * params.fuselage_drag_ratio * params.air_density *
                          params.rotor_solidity * params.rotor_area * v2 * v_mps;
  return blade + induced + parasite;
}

double total_energy(Mode mode, double power_w, double v_mps, const EnergyParams& params,
                    double tau1, double tau2) {
  const double ph = hover_power(params.propulsion);
  const double radio = ph + power_w + params.circuit_power;
  if (mode == Mode::kFly) return propulsion_power(v_mps, params.propulsion) * tau1 + radio * tau2;
  return radio * (tau1 + tau2);
}

double step_battery(double e, double e_total, double harvest, double e_max) {
  return std::min(std::max(e - e_total, 0.0) + harvest, e_max);
}

int battery_level(double e, double e_max, int levels) {
  const int level = static_cast<int>(std::floor(e / e_max * levels));
  return std::clamp(level, 0, levels - 1);
}

double battery_level_midpoint(int level, double e_max, int levels) {
  return (level + 0.5) * e_max / levels;
}

}  // namespace uavmf::env
