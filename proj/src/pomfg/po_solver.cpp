#include "uavmf/pomfg/po_solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace uavmf::pomfg {

PoPropagation propagate_po_population(const env::PhysicsConfig& phys, const rl::Policy& policy,
                                      double coverage, int staleness_cap,
                                      const ObservationMeanField& obs_features,
                                      const mfg::MeanField& start,
                                      const mfg::PropagationConfig& config, Rng& rng) {
  if (config.average_last < 1 || config.average_last > config.slots)
    throw std::invalid_argument("propagation window must lie within the rollout");
  const env::Geometry& geo = phys.geometry;
  const int gus = geo.gus_per_cell();
  const int cells = geo.num_cells();
  const int rep = geo.centre_cell();
  const env::StateSpace states(gus, phys.energy.energy_levels);
  const env::ActionSpace actions(gus, phys.energy.num_power_levels());

  const std::vector<double> mu = start.state_marginal();
  std::discrete_distribution<int> pick(mu.begin(), mu.end());
  env::WorldState world;
  std::vector<CompressedHistory> hist;
  for (int k = 0; k < cells; ++k) {
    const auto d = states.decode(pick(rng));
    env::AgentState s;
    s.demand = d.demand;
    s.prev_hover = d.prev_hover;
    s.battery_level = d.level;
    s.battery =
        env::battery_level_midpoint(d.level, phys.energy.battery_max, phys.energy.energy_levels);
    world.agents.push_back(s);
    hist.push_back(update_history(CompressedHistory::initial(gus, staleness_cap),
                                  observe(s, s.prev_hover, coverage, geo)));
  }
  world.alive.assign(cells, 1);

  const int width = history_feature_width(gus) + obs_features.layout().size();
  std::vector<std::pair<int, int>> true_samples;
  std::vector<std::pair<CompressedHistory, env::AgentAction>> obs_samples;
  std::vector<double> f;
  Eigen::MatrixXd x(width, cells);
  for (int t = 0; t < config.slots; ++t) {
    for (int k = 0; k < cells; ++k) {
      f.clear();
      append_history_features(hist[k], phys.energy.energy_levels, f);
      f.insert(f.end(), obs_features.table().begin(), obs_features.table().end());
      x.col(k) = Eigen::Map<const Eigen::VectorXd>(f.data(), width);
    }
    const Eigen::MatrixXd q = policy.net->forward(x);
    std::vector<env::AgentAction> acts(cells);
    const bool record = t >= config.slots - config.average_last;
    for (int k = 0; k < cells; ++k) {
      const rl::ActionMask mask = env::feasible_mask(phys, actions, world.agents[k]);
      const auto col = q.col(k);
      const int a = policy.act_on_q(std::span<const double>(col.data(), col.size()), mask, rng);
      acts[k] = actions.decode(a);
      if (record && k != rep) {
        true_samples.emplace_back(states.index(world.agents[k]), a);
        obs_samples.emplace_back(hist[k], acts[k]);
      }
    }
    env::step_world(world, acts, phys, rng);
    for (int k = 0; k < cells; ++k) {
      const env::AgentState& s = world.agents[k];
      hist[k] = update_history(hist[k], observe(s, s.prev_hover, coverage, geo));
    }
  }
  return {mfg::empirical_meanfield(start.layout_ptr(), true_samples),
          ObservationMeanField::empirical(obs_features.layout(), obs_samples)};
}

rl::Policy train_pomfg(PoEnv& env, int episodes, const rl::TrainerConfig& config,
                       const rl::Schedule& entropy, std::uint64_t seed) {
  return rl::train_best_response(env, episodes, config, entropy, seed);
}

void solve_pomfg(const env::PhysicsConfig& phys, const rl::LearnerRule& rule,
                 const PoSolverConfig& config, PoSolveResult& res) {
  const mfg::SolverConfig& base = config.base;
  const int gus = phys.geometry.gus_per_cell();
  const env::StateSpace states(gus, phys.energy.energy_levels);
  const env::ActionSpace actions(gus, phys.energy.num_power_levels());
  const ObservationLayout obs_layout{gus, phys.energy.num_power_levels()};

  mfg::MeanField mf = mfg::MeanField::uniform(mfg::MeanFieldLayout::for_uav(states, actions));
  ObservationMeanField obs = ObservationMeanField::uniform(obs_layout);
  res.meanfield = mf;
  res.obs_meanfield = obs;

  PoEnv env(phys, config.coverage, config.staleness_cap, obs, mf);
  res.trainer = std::make_unique<rl::DqnTrainer>(env.feature_width(), env.num_actions(),
                                                 base.trainer, rule, base.seed);
  res.trainer->set_horizon(static_cast<std::int64_t>(base.outer_iterations) *
                           base.episodes_per_iteration * base.trainer.steps_per_episode);

  res.report = {};
  for (int k = 0; k < base.outer_iterations; ++k) {
    env.set_observation_meanfield(obs);
    env.set_interference(mf);
    if (base.flush_buffer) res.trainer->flush_buffer();
    if (base.reinitialize && k > 0) res.trainer->reinitialize();
    const auto stats = res.trainer->train(env, base.episodes_per_iteration, k);
    res.episodes.insert(res.episodes.end(), stats.begin(), stats.end());
    res.episode_iteration.insert(res.episode_iteration.end(), stats.size(), k);
    res.policy = res.trainer->final_policy();

    Rng rng = derive_stream(base.seed, 0x706f7072ULL, static_cast<std::uint64_t>(k));
    PoPropagation next = propagate_po_population(phys, res.policy, config.coverage,
                                                 config.staleness_cap, obs, mf,
                                                 base.propagation, rng);
    const double d = distance(next.obs_meanfield, obs);
    res.report.distances.push_back(d);
    res.report.distances_if.push_back(mfg::distance_if(next.meanfield, mf));
    if (k > 0) {
      const double prev = res.report.distances[k - 1];
      res.report.contraction_ratios.push_back(
          prev > 0.0 ? d / prev : std::numeric_limits<double>::quiet_NaN());
      if (k >= 3 && d > prev) res.report.flagged = true;
    }
    res.report.iterations = k + 1;
    if (res.report.best_iteration < 0 || d < res.report.distances[res.report.best_iteration])
      res.report.best_iteration = k;
    mf = std::move(next.meanfield);
    obs = std::move(next.obs_meanfield);
    res.meanfield = mf;
    res.obs_meanfield = obs;
    if (d < base.tolerance) {
      res.report.converged = true;
      break;
    }
  }
  res.policy = res.trainer->final_policy();
}

}  // namespace uavmf::pomfg
