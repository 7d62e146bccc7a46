#include "uavmf/mfg/micro.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "uavmf/baselines/exploration.hpp"
#include "uavmf/env/world.hpp"

namespace uavmf::mfg {

namespace {
constexpr int kMaxEnumeratedNeighbours = 12;
}

MicroInstance::MicroInstance(MicroConfig config)
    : config_(config),
      states_(1, config.energy_levels),
      actions_(1, 2) {
  phys_.geometry.grid_rows = config_.grid;
  phys_.geometry.grid_cols = config_.grid;
  phys_.geometry.cell_side = config_.cell_side;
  phys_.geometry.gu_offsets = {{0.0, 0.0}};
  phys_.channel = env::ChannelParams::for_altitude(phys_.geometry.altitude);
  phys_.energy.power_levels = {0.0, config_.power_w};
  phys_.energy.energy_levels = config_.energy_levels;
  phys_.energy.battery_max = config_.battery_max;
  phys_.energy.battery_alarm = 0.1 * config_.battery_max;
  phys_.reward.sigma = config_.sigma;
  layout_ = MeanFieldLayout::for_uav(states_, actions_);

  const int rep = phys_.geometry.centre_cell();
  for (int k = 0; k < phys_.geometry.num_cells(); ++k)
    if (k != rep) neighbour_cells_.push_back(k);
  if (neighbours() > kMaxEnumeratedNeighbours)
    throw std::invalid_argument("micro instance: too many neighbours to enumerate");

  Rng rng(config_.fading_seed);
  const env::Vec2 gu = phys_.geometry.gu_position(rep, 0);
  const auto gain_from = [&](int cell) {
    const env::Vec3 uav = phys_.geometry.hover_position(cell, 0);
    return env::sample_link(env::distance_3d(uav, gu), env::elevation_deg(uav, gu), phys_.channel,
                            rng)
        .gain;
  };
  const int n = neighbours();
  for (int m = 0; m < config_.fading_samples; ++m) {
    own_gain_.push_back(gain_from(rep));
    std::vector<double> g;
    for (int j : neighbour_cells_) g.push_back(gain_from(j));
    std::vector<double> sums(std::size_t{1} << n, 0.0);
    for (std::size_t mask = 1; mask < sums.size(); ++mask)
      sums[mask] = sums[mask & (mask - 1)] + g[std::countr_zero(mask)];
    neigh_gain_.push_back(std::move(g));
    subset_gain_.push_back(std::move(sums));
  }

  // Transition kernel; independent of the mean-field.
  transitions_.num_states = states_.size();
  transitions_.num_actions = actions_.size();
  transitions_.reward.assign(static_cast<std::size_t>(states_.size()) * actions_.size(), 0.0);
  transitions_.transitions.resize(transitions_.reward.size());
  const auto& clouds = phys_.energy.cloud_levels;
  const int gus = states_.gus();
  for (int s = 0; s < states_.size(); ++s) {
    const env::AgentState st = state_of(s);
    transitions_.masks.push_back(env::feasible_mask(phys_, actions_, st));
    for (int a = 0; a < actions_.size(); ++a) {
      const env::AgentAction act = actions_.decode(a);
      const double e_total = env::action_energy(phys_, st, act);
      std::map<int, double> next;
      for (double cloud : clouds) {
        const double pc = 1.0 / static_cast<double>(clouds.size());
        const double e = env::step_battery(st.battery, e_total,
                                           env::harvest_energy(cloud, phys_.energy, phys_.link.tau),
                                           phys_.energy.battery_max);
        const int level = env::battery_level(e, phys_.energy.battery_max, states_.energy_levels());
        for (std::uint32_t d = 0; d < (1U << gus); ++d) {
          double pd = 1.0;
          for (int u = 0; u < gus; ++u) {
            const double on = st.active(u) ? phys_.demand.q : phys_.demand.p;
            pd *= ((d >> u) & 1U) ? on : 1.0 - on;
          }
          if (pd * pc > 0.0) next[states_.index(d, act.hover, level)] += pd * pc;
        }
      }
      transitions_.transitions[transitions_.cell(s, a)].assign(next.begin(), next.end());
    }
  }
}

env::AgentState MicroInstance::state_of(int s) const {
  const auto d = states_.decode(s);
  env::AgentState st;
  st.demand = d.demand;
  st.prev_hover = d.prev_hover;
  st.battery_level = d.level;
  st.battery = env::battery_level_midpoint(d.level, phys_.energy.battery_max,
                                           phys_.energy.energy_levels);
  return st;
}

std::pair<double, double> MicroInstance::transmit_probabilities(const MeanField& mf) const {
  double t1 = 0.0, t2 = 0.0;
  const auto& m = mf.marginal_if();
  for (int i = 0; i < static_cast<int>(m.size()); ++i) {
    const InterferenceKey k = decode_interference(i, actions_.power_levels());
    if (k.power_idx == 0 || !k.serving_active) continue;
    t2 += m[i];
    if (k.hovering) t1 += m[i];
  }
  return {t1, t2};
}

double MicroInstance::success_probability(double t) const {
  const int n = neighbours();
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<double> w(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    const int k = std::popcount(mask);
    w[mask] = std::pow(t, k) * std::pow(1.0 - t, n - k);
  }
  const double p = config_.power_w;
  const double eta = phys_.link.eta;
  const double noise = phys_.link.noise;
  double total = 0.0;
  for (std::size_t m = 0; m < own_gain_.size(); ++m) {
    // SINR >= eta  <=>  interference gain sum <= g0 / eta - N0 / p
    const double limit = own_gain_[m] / eta - noise / p;
    double hit = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask)
      if (subset_gain_[m][mask] <= limit) hit += w[mask];
    total += hit;
  }
  return total / static_cast<double>(own_gain_.size());
}

std::pair<double, double> MicroInstance::success_probabilities(const MeanField& mf) const {
  const auto [t1, t2] = transmit_probabilities(mf);
  return {success_probability(t1), success_probability(t2)};
}

double MicroInstance::expected_reward(const env::AgentState& st, const env::AgentAction& a,
                                      double succ1, double succ2) const {
  const env::Mode mode = env::mode_of(st, a);
  const double power = phys_.energy.power_levels[a.power_idx];
  const bool serving = a.assoc && st.active(*a.assoc) && power > 0.0;
  const double unit = phys_.link.bandwidth * std::log2(1.0 + phys_.link.eta);
  double rate = 0.0;
  if (serving) {
    rate = phys_.link.tau2 * succ2 * unit;
    if (mode == env::Mode::kHover) rate += phys_.link.tau1 * succ1 * unit;
  }
  const double e_total = env::action_energy(phys_, st, a);
  return env::reward(rate / e_total, power, mode, st.battery, e_total, phys_.reward,
                     phys_.energy.battery_alarm, phys_.link.tau1, phys_.link.tau2)
      .value;
}

rl::TabularMdp MicroInstance::build_mdp(const MeanField& mf) const {
  const auto [succ1, succ2] = success_probabilities(mf);
  rl::TabularMdp mdp = transitions_;
  for (int s = 0; s < states_.size(); ++s) {
    const env::AgentState st = state_of(s);
    for (int a = 0; a < actions_.size(); ++a)
      mdp.reward[mdp.cell(s, a)] =
          config_.reward_scale * expected_reward(st, actions_.decode(a), succ1, succ2);
  }
  return mdp;
}

MeanField MicroInstance::propagate_exact(const MeanField& mf,
                                         const std::vector<double>& policy) const {
  const int ns = states_.size();
  const int na = actions_.size();
  const std::vector<double> mu = mf.state_marginal();
  std::vector<double> next(ns, 0.0);
  for (int s = 0; s < ns; ++s) {
    if (mu[s] == 0.0) continue;
    for (int a = 0; a < na; ++a) {
      const double w = mu[s] * policy[static_cast<std::size_t>(s) * na + a];
      if (w == 0.0) continue;
      for (const auto& [sp, p] : transitions_.transitions[transitions_.cell(s, a)])
        next[sp] += w * p;
    }
  }
  std::vector<double> joint(static_cast<std::size_t>(ns) * na, 0.0);
  double sum = 0.0;
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < na; ++a) {
      joint[static_cast<std::size_t>(s) * na + a] = next[s] * policy[static_cast<std::size_t>(s) * na + a];
      sum += joint[static_cast<std::size_t>(s) * na + a];
    }
  for (double& v : joint) v /= sum;
  return MeanField(layout_, std::move(joint));
}

MeanField MicroInstance::propagate_empirical(const MeanField& mf, const std::vector<double>& policy,
                                             int samples, Rng& rng) const {
  const int na = actions_.size();
  const std::vector<double> mu = mf.state_marginal();
  std::discrete_distribution<int> pick(mu.begin(), mu.end());
  const auto act = [&](int s) {
    return baselines::sample_categorical(
        std::span<const double>(policy.data() + static_cast<std::size_t>(s) * na, na), rng);
  };
  std::vector<std::pair<int, int>> pooled;
  pooled.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const int s = pick(rng);
    const int sp = sample_next_state(s, act(s), rng);
    pooled.emplace_back(sp, act(sp));
  }
  return empirical_meanfield(layout_, pooled);
}

int MicroInstance::sample_next_state(int s, int a, Rng& rng) const {
  const auto& row = transitions_.transitions[transitions_.cell(s, a)];
  double u = uniform01(rng);
  for (const auto& [sp, p] : row) {
    if (u < p) return sp;
    u -= p;
  }
  return row.back().first;
}

double MicroInstance::sample_reward(int s, int a, double t1, double t2, Rng& rng) const {
  const env::AgentState st = state_of(s);
  const env::AgentAction act = actions_.decode(a);
  const std::size_t m =
      std::uniform_int_distribution<std::size_t>(0, own_gain_.size() - 1)(rng);
  const double p = config_.power_w;
  double sum1 = 0.0, sum2 = 0.0;
  for (int j = 0; j < neighbours(); ++j) {
    const double u = uniform01(rng);
    if (u < t2) sum2 += neigh_gain_[m][j];
    if (u < t1) sum1 += neigh_gain_[m][j];
  }
  const double eta = phys_.link.eta;
  const double sinr1 = own_gain_[m] * p / (sum1 * p + phys_.link.noise);
  const double sinr2 = own_gain_[m] * p / (sum2 * p + phys_.link.noise);
  return expected_reward(st, act, sinr1 >= eta ? 1.0 : 0.0, sinr2 >= eta ? 1.0 : 0.0);
}

MicroEnv::MicroEnv(const MicroInstance& instance, MeanField meanfield, rl::FeatureMode mode)
    : instance_(instance),
      meanfield_(std::move(meanfield)),
      mode_(mode),
      mdp_(instance.build_mdp(meanfield_)) {
  rl::append_meanfield_features(meanfield_, mode_, mf_features_);
  std::tie(t1_, t2_) = instance_.transmit_probabilities(meanfield_);
}

int MicroEnv::feature_width() const {
  return rl::state_feature_width(instance_.states().gus()) + static_cast<int>(mf_features_.size());
}

void MicroEnv::reset(Rng& rng) {
  state_ = std::uniform_int_distribution<int>(0, instance_.states().size() - 1)(rng);
}

void MicroEnv::features_of(int s, std::vector<double>& out) const {
  out.clear();
  rl::append_state_features(instance_.state_of(s), instance_.states().gus(),
                            instance_.states().energy_levels(), out);
  out.insert(out.end(), mf_features_.begin(), mf_features_.end());
}

void MicroEnv::features(std::vector<double>& out) const { features_of(state_, out); }

rl::ActionMask MicroEnv::feasible_mask() const { return mdp_.masks[state_]; }

rl::StepInfo MicroEnv::step(int action, Rng& rng) {
  if (!mdp_.allowed(state_, action))
    action = instance_.actions().null_action(instance_.state_of(state_).prev_hover);
  const env::AgentAction a = instance_.actions().decode(action);
  rl::StepInfo info;
  info.reward = instance_.sample_reward(state_, action, t1_, t2_, rng);
  info.power_w = instance_.physics().energy.power_levels[a.power_idx];
  info.flew = a.hover != instance_.state_of(state_).prev_hover;
  state_ = instance_.sample_next_state(state_, action, rng);
  return info;
}

}  // namespace uavmf::mfg
