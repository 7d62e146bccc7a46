#pragma once

#include <cmath>
#include <vector>

// Physical and game constants of the UAV downlink model. Defaults are the
// values used by the desk-scale experiments; every field is overridable from
// the experiment config (see uavmf/harness/config.hpp).

namespace uavmf::env {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Two-state Markov demand of a ground user: Pr(1|0) = p, Pr(1|1) = q.
struct DemandChain {
  double p = 0.3;
  double q = 0.7;

  double stationary_active() const { return p / (1.0 + p - q); }
};

// Square cells laid out on a rows x cols grid; each cell holds one UAV and
// its GUs. Hover point n of a cell sits directly above GU n.
struct Geometry {
  int grid_rows = 7;
  int grid_cols = 7;
  double cell_side = 1000.0;  // m
  double altitude = 100.0;    // m
  std::vector<Vec2> gu_offsets = {{-250.0, -250.0}, {250.0, -250.0},
                                  {-250.0, 250.0}, {250.0, 250.0}};

  int num_cells() const { return grid_rows * grid_cols; }
  int gus_per_cell() const { return static_cast<int>(gu_offsets.size()); }
  // Centre cell of the grid, where the representative UAV lives.
  int centre_cell() const { return (grid_rows / 2) * grid_cols + grid_cols / 2; }

  Vec2 cell_centre(int cell) const;
  Vec2 gu_position(int cell, int gu) const;
  Vec3 hover_position(int cell, int hover) const;
  double hover_distance(int from, int to) const;
};

// Air-to-ground channel. Elevation angles are in degrees.
struct ChannelParams {
  double c1 = 10.0;
  double c2 = 0.6;
  double a_los = std::pow(10.0, -3.692);
  double a_nlos = std::pow(10.0, -3.842);
  double alpha_los = 2.125;
  double alpha_nlos = 2.8;
  double nakagami_m = 2.0;
  double omega = 1.0;

  // Path-loss exponents fitted to the UAV altitude.
  static ChannelParams for_altitude(double altitude);
};

// Rotary-wing propulsion model constants.
struct PropulsionParams {
  double weight = 20.0;             // N
  double air_density = 1.225;       // kg/m^3
  double rotor_radius = 0.4;        // m
  double rotor_area = 0.503;        // m^2
  double rotor_solidity = 0.05;
  double blade_angular_velocity = 300.0;  // rad/s
  double fuselage_drag_ratio = 0.6;
  double profile_drag_coeff = 0.012;
  double induced_correction = 0.1;

  double blade_profile_hover() const;  // p^f1
  double induced_hover() const;        // p^f2
};

struct EnergyParams {
  double harvest_efficiency = 0.4;     // dimensionless
  double panel_area = 1.0;             // m^2
  double irradiance = 1367.0;          // W/m^2
  double cloud_absorption = 0.01;      // 1/m
  std::vector<double> cloud_levels = {0.0, 700.0};  // m
  double circuit_power = 0.01;         // W
  std::vector<double> power_levels = {0.0, 0.05, 0.10, 0.15, 0.20};  // W
  double battery_max = 5.0e5;          // J
  double battery_alarm = 5.0e4;        // J
  int energy_levels = 8;
  double max_speed = 60.0;             // m/s
  PropulsionParams propulsion;

  int num_power_levels() const { return static_cast<int>(power_levels.size()); }
};

struct LinkParams {
  double eta = 1.0;          // SINR threshold, linear
  double bandwidth = 1.0e6;  // Hz
  double tau = 60.0;         // s
  double tau1 = 25.0;        // s
  double tau2 = 35.0;        // s
  double noise = 1.0e-14;    // W
};

struct RewardParams {
  double sigma = 240.0;  // per W*s of radiated power-time
  double xi = 0.001;     // per J below the alarm threshold
};

struct PhysicsConfig {
  Geometry geometry;
  ChannelParams channel;
  EnergyParams energy;
  LinkParams link;
  RewardParams reward;
  DemandChain demand;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace uavmf::env
