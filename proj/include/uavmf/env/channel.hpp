#pragma once

#include <span>

#include "uavmf/core/rng.hpp"
#include "uavmf/env/physics.hpp"

namespace uavmf::env {

enum class Mode { kFly = 1, kHover = 2 };

// Elevation of the UAV seen from the GU, in degrees; 90 when overhead.
double elevation_deg(const Vec3& uav, const Vec2& gu);

double distance_3d(const Vec3& uav, const Vec2& gu);

double los_probability(double theta_deg, const ChannelParams& params);

// Deterministic large-scale loss A * D^-alpha of one branch.
double path_loss(double distance_m, bool los, const ChannelParams& params);

struct LinkSample {
  double gain = 0.0;  // |h|^2 = l * g^2
  bool los = false;
};

LinkSample sample_link(double distance_m, double theta_deg, const ChannelParams& params,
                       Rng& rng);

// Small-scale power g^2 for a Nakagami-m amplitude: Gamma(m, omega/m).
double sample_fading_power(double m, double omega, Rng& rng);

// Expected |h|^2 over the LoS mixture, with E[g^2] = omega.
double mean_link_gain(double distance_m, double theta_deg, const ChannelParams& params);

struct Interferer {
  double gain = 0.0;
  double power = 0.0;
  bool transmitting = false;
};

// The caller applies the phase gating: own_active folds in phi (tau1 only),
// the association and the GU's demand bit; interferer transmitting flags are
// phase-specific.
double compute_sinr(double link_gain, double own_power, bool own_active,
                    std::span<const Interferer> interferers, double noise);

// Bits delivered in one slot. Fixed-rate transmission at log2(1 + eta).
double achievable_rate(Mode mode, double sinr1, double sinr2, double eta, double bandwidth,
                       double tau1, double tau2);

}  // namespace uavmf::env
