#include "uavmf/mfg/propagate.hpp"

#include <random>
#include <stdexcept>

namespace uavmf::mfg {

PopulationSimulator::PopulationSimulator(env::PhysicsConfig phys, rl::Policy policy,
                                         rl::FeatureMode mode, const MeanField& feature_meanfield)
    : phys_(std::move(phys)),
      states_(phys_.geometry.gus_per_cell(), phys_.energy.energy_levels),
      actions_(phys_.geometry.gus_per_cell(), phys_.energy.num_power_levels()),
      policy_(std::move(policy)),
      mode_(mode) {
  rl::append_meanfield_features(feature_meanfield, mode_, mf_features_);
}

void PopulationSimulator::reset(Rng& rng) { world_ = env::initial_world(phys_, rng); }

void PopulationSimulator::reset_from(const MeanField& mf, Rng& rng) {
  const std::vector<double> mu = mf.state_marginal();
  std::discrete_distribution<int> pick(mu.begin(), mu.end());
  const int cells = phys_.geometry.num_cells();
  world_ = env::WorldState{};
  world_.agents.reserve(cells);
  for (int k = 0; k < cells; ++k) {
    const auto d = states_.decode(pick(rng));
    env::AgentState s;
    s.demand = d.demand;
    s.prev_hover = d.prev_hover;
    s.battery_level = d.level;
    s.battery = env::battery_level_midpoint(d.level, phys_.energy.battery_max,
                                            phys_.energy.energy_levels);
    world_.agents.push_back(s);
  }
  world_.alive.assign(cells, 1);
}

const env::WorldStep& PopulationSimulator::step(Rng& rng) {
  const int cells = phys_.geometry.num_cells();
  const int gus = states_.gus();
  const int width = rl::state_feature_width(gus) + static_cast<int>(mf_features_.size());
  std::vector<int> live;
  for (int k = 0; k < cells; ++k)
    if (world_.alive[k]) live.push_back(k);

  Eigen::MatrixXd x(width, static_cast<Eigen::Index>(live.size()));
  std::vector<double> f;
  for (std::size_t i = 0; i < live.size(); ++i) {
    f.clear();
    rl::append_state_features(world_.agents[live[i]], gus, states_.energy_levels(), f);
    f.insert(f.end(), mf_features_.begin(), mf_features_.end());
    x.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(f.data(), width);
  }
  const Eigen::MatrixXd q = live.empty() ? Eigen::MatrixXd() : policy_.net->forward(x);

  std::vector<env::AgentAction> acts(cells, actions_.decode(0));
  action_idx_.assign(cells, -1);
  for (std::size_t i = 0; i < live.size(); ++i) {
    const int k = live[i];
    const env::AgentState& s = world_.agents[k];
    const rl::ActionMask mask = env::feasible_mask(phys_, actions_, s);
    const auto col = q.col(static_cast<Eigen::Index>(i));
    const int a = policy_.act_on_q(std::span<const double>(col.data(), col.size()), mask, rng);
    acts[k] = actions_.decode(a);
    action_idx_[k] = a;
  }

  samples_.clear();
  const int rep = representative();
  for (int k : live)
    if (k != rep) samples_.emplace_back(states_.index(world_.agents[k]), action_idx_[k]);

  last_ = env::step_world(world_, acts, phys_, rng);
  return last_;
}

MeanField propagate_population(const env::PhysicsConfig& phys, const rl::Policy& policy,
                               rl::FeatureMode mode, const MeanField& mf,
                               const PropagationConfig& config, Rng& rng) {
  if (config.average_last < 1 || config.average_last > config.slots)
    throw std::invalid_argument("propagation window must lie within the rollout");
  PopulationSimulator sim(phys, policy, mode, mf);
  sim.reset_from(mf, rng);
  std::vector<std::pair<int, int>> pooled;
  for (int t = 0; t < config.slots; ++t) {
    sim.step(rng);
    if (t >= config.slots - config.average_last)
      pooled.insert(pooled.end(), sim.last_samples().begin(), sim.last_samples().end());
  }
  return empirical_meanfield(mf.layout_ptr(), pooled);
}

}  // namespace uavmf::mfg
