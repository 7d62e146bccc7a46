#include "uavmf/env/channel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace uavmf::env {

double elevation_deg(const Vec3& uav, const Vec2& gu) {
  const double horizontal = std::hypot(uav.x - gu.x, uav.y - gu.y);
  return std::atan2(uav.z, horizontal) * 180.0 / std::numbers::pi;
}

double distance_3d(const Vec3& uav, const Vec2& gu) {
  return std::sqrt((uav.x - gu.x) * (uav.x - gu.x) + (uav.y - gu.y) * (uav.y - gu.y) +
                   uav.z * uav.z);
}

double los_probability(double theta_deg, const ChannelParams& params) {
  return 1.0 / (1.0 + params.c1 * std::exp(-params.c2 * (theta_deg - params.c1)));
}

double path_loss(double distance_m, bool los, const ChannelParams& params) {
  return los ? params.a_los * std::pow(distance_m, -params.alpha_los)
             : params.a_nlos * std::pow(distance_m, -params.alpha_nlos);
}

double sample_fading_power(double m, double omega, Rng& rng) {
  return std::gamma_distribution<double>(m, omega / m)(rng);
}

LinkSample sample_link(double distance_m, double theta_deg, const ChannelParams& params,
                       Rng& rng) {
  LinkSample s;
  s.los = uniform01(rng) < los_probability(theta_deg, params);
  // NLoS links are Rayleigh (m = 1).
  const double m = s.los ? params.nakagami_m : 1.0;
  s.gain = path_loss(distance_m, s.los, params) * sample_fading_power(m, params.omega, rng);
  return s;
}

double mean_link_gain(double distance_m, double theta_deg, const ChannelParams& params) {
  const double p = los_probability(theta_deg, params);
  return params.omega * (p * path_loss(distance_m, true, params) +
                         (1.0 - p) * path_loss(distance_m, false, params));
}

double compute_sinr(double link_gain, double own_power, bool own_active,
                    std::span<const Interferer> interferers, double noise) {
  if (!own_active) return 0.0;
  double interference = 0.0;
  for (const auto& i : interferers) {
    if (i.transmitting) interference += i.power * i.gain;
  }
  return own_power * link_gain / (interference + noise);
}

double achievable_rate(Mode mode, double sinr1, double sinr2, double eta, double bandwidth,
                       double tau1, double tau2) {
  const double per_second = bandwidth * std::log2(1.0 + eta);
  const double t2 = sinr2 >= eta ? tau2 : 0.0;
  if (mode == Mode::kFly) return t2 * per_second;
  const double t1 = sinr1 >= eta ? tau1 : 0.0;
  return (t1 + t2) * per_second;
}

}  // namespace uavmf::env
