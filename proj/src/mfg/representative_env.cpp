#include "uavmf/mfg/representative_env.hpp"

#include <stdexcept>

namespace uavmf::mfg {

InterfererSampler::InterfererSampler(const std::vector<double>& marginal_if)
    : dist_(marginal_if.begin(), marginal_if.end()) {}

InterferenceKey InterfererSampler::sample(int power_levels, Rng& rng) const {
  return decode_interference(dist_(rng), power_levels);
}

void sample_meanfield_interference(const env::PhysicsConfig& phys, int rep_cell, int gu,
                                   const std::vector<std::uint8_t>& alive,
                                   const InterfererSampler& sampler, Rng& rng,
                                   std::vector<env::Interferer>& phase1,
                                   std::vector<env::Interferer>& phase2) {
  phase1.clear();
  phase2.clear();
  const env::Geometry& geo = phys.geometry;
  const env::Vec2 target = geo.gu_position(rep_cell, gu);
  const int powers = phys.energy.num_power_levels();
  for (int j = 0; j < geo.num_cells(); ++j) {
    if (j == rep_cell || !alive[j]) continue;
    const InterferenceKey key = sampler.sample(powers, rng);
    if (key.power_idx == 0 || !key.serving_active) continue;
    const env::Vec3 uav = geo.hover_position(j, key.hover);
    const double g = env::sample_link(env::distance_3d(uav, target), env::elevation_deg(uav, target),
                                      phys.channel, rng)
                         .gain;
    const double p = phys.energy.power_levels[key.power_idx];
    phase2.push_back({g, p, true});
    if (key.hovering) phase1.push_back({g, p, true});
  }
}

RepresentativeEnv::RepresentativeEnv(env::PhysicsConfig phys, rl::FeatureMode mode,
                                     MeanField meanfield)
    : phys_(std::move(phys)),
      states_(phys_.geometry.gus_per_cell(), phys_.energy.energy_levels),
      actions_(phys_.geometry.gus_per_cell(), phys_.energy.num_power_levels()),
      mode_(mode),
      meanfield_(std::move(meanfield)),
      alive_(phys_.geometry.num_cells(), 1),
      rep_cell_(phys_.geometry.centre_cell()) {
  set_meanfield(meanfield_);
}

void RepresentativeEnv::set_meanfield(MeanField meanfield) {
  if (meanfield.layout().num_states != states_.size() ||
      meanfield.layout().num_actions != actions_.size())
    throw std::invalid_argument("mean-field shape does not match the UAV spaces");
  meanfield_ = std::move(meanfield);
  mf_features_.clear();
  rl::append_meanfield_features(meanfield_, mode_, mf_features_);
  sampler_ = InterfererSampler(meanfield_.marginal_if());
}

void RepresentativeEnv::set_interference_marginal(const std::vector<double>& marginal_if) {
  sampler_ = InterfererSampler(marginal_if);
}

void RepresentativeEnv::set_alive(std::vector<std::uint8_t> alive) {
  if (static_cast<int>(alive.size()) != phys_.geometry.num_cells())
    throw std::invalid_argument("alive mask size does not match the grid");
  alive_ = std::move(alive);
}

int RepresentativeEnv::feature_width() const {
  return rl::state_feature_width(states_.gus()) + static_cast<int>(mf_features_.size());
}

void RepresentativeEnv::reset(Rng& rng) { state_ = env::initial_agent(phys_, rng); }

void RepresentativeEnv::features(std::vector<double>& out) const {
  out.clear();
  rl::append_state_features(state_, states_.gus(), states_.energy_levels(), out);
  out.insert(out.end(), mf_features_.begin(), mf_features_.end());
}

rl::ActionMask RepresentativeEnv::feasible_mask() const {
  return env::feasible_mask(phys_, actions_, state_);
}

rl::StepInfo RepresentativeEnv::step(int action, Rng& rng) {
  env::AgentAction a = actions_.decode(action);
  bool substituted = false;
  if (!actions_.canonical(action) || env::action_energy(phys_, state_, a) > state_.battery) {
    a = actions_.decode(actions_.null_action(state_.prev_hover));
    substituted = true;
  }
  const double cloud = phys_.energy.cloud_levels.empty()
                           ? 0.0
                           : phys_.energy.cloud_levels[std::uniform_int_distribution<int>(
                                 0, static_cast<int>(phys_.energy.cloud_levels.size()) - 1)(rng)];
  double own_gain = 0.0;
  phase1_.clear();
  phase2_.clear();
  if (a.assoc) {
    const env::Vec3 uav = phys_.geometry.hover_position(rep_cell_, a.hover);
    const env::Vec2 gu = phys_.geometry.gu_position(rep_cell_, *a.assoc);
    own_gain = env::sample_link(env::distance_3d(uav, gu), env::elevation_deg(uav, gu),
                                phys_.channel, rng)
                   .gain;
    sample_meanfield_interference(phys_, rep_cell_, *a.assoc, alive_, sampler_, rng, phase1_,
                                  phase2_);
  }
  last_ = env::evaluate_slot(phys_, state_, a, own_gain, phase1_, phase2_, cloud);
  last_.substituted = substituted;
  last_action_ = a;

  rl::StepInfo info;
  info.reward = last_.reward;
  info.ee = last_.ee;
  info.interference_penalty = last_.interference_penalty;
  info.power_w = last_.power_w;
  info.flew = last_.mode == env::Mode::kFly;
  info.substituted = substituted;
  env::advance_agent(phys_, state_, a, last_, rng);
  return info;
}

}  // namespace uavmf::mfg
