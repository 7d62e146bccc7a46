#include "uavmf/mfg/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "uavmf/mfg/representative_env.hpp"

namespace uavmf::mfg {

FixedPointResult iterate_fixed_point(MeanField initial, const MeanFieldMap& map,
                                     const FixedPointConfig& config) {
  EquilibriumReport report;
  MeanField current = std::move(initial);
  MeanField best = current;
  double best_distance = std::numeric_limits<double>::infinity();
  for (int k = 0; k < config.max_iterations; ++k) {
    MeanField next = map(current, k);
    const double d = distance(next, current);
    report.distances.push_back(d);
    report.distances_if.push_back(distance_if(next, current));
    if (k > 0) {
      const double prev = report.distances[k - 1];
      report.contraction_ratios.push_back(prev > 0.0 ? d / prev
                                                     : std::numeric_limits<double>::quiet_NaN());
      if (k >= config.transient && d > prev) report.flagged = true;
    }
    report.iterations = k + 1;
    if (d < best_distance) {
      best_distance = d;
      best = next;
      report.best_iteration = k;
    }
    current = std::move(next);
    if (d < config.tolerance) {
      report.converged = true;
      break;
    }
  }
  return {std::move(current), std::move(best), std::move(report)};
}

void write_report_csv(const EquilibriumReport& report, std::ostream& out) {
  out << "iteration,distance,distance_if,contraction_ratio\n";
  for (std::size_t k = 0; k < report.distances.size(); ++k) {
    out << k << ',' << report.distances[k] << ',' << report.distances_if[k] << ',';
    if (k > 0 && std::isfinite(report.contraction_ratios[k - 1]))
      out << report.contraction_ratios[k - 1];
    out << '\n';
  }
}

MicroEquilibrium solve_micro_equilibrium(const MicroInstance& instance, MeanField initial,
                                         const MicroSolveConfig& config) {
  MicroEquilibrium out{initial, {}, {}, {}};
  const MeanFieldMap map = [&](const MeanField& mf, int) {
    const rl::TabularMdp mdp = instance.build_mdp(mf);
    out.values = rl::tabular_soft_value_iteration(mdp, config.gamma, config.phi,
                                                  config.value_tolerance);
    out.policy = rl::tabular_soft_policy(mdp, out.values.q, config.phi);
    return instance.propagate_exact(mf, out.policy);
  };
  FixedPointResult r = iterate_fixed_point(std::move(initial), map, config.fixed_point);
  out.meanfield = std::move(r.final_meanfield);
  out.report = std::move(r.report);
  return out;
}

void solve_equilibrium(const env::PhysicsConfig& phys, const LearnerSetup& learner,
                       const SolverConfig& config, SolveResult& res) {
  const env::StateSpace states(phys.geometry.gus_per_cell(), phys.energy.energy_levels);
  const env::ActionSpace actions(phys.geometry.gus_per_cell(), phys.energy.num_power_levels());
  auto layout = MeanFieldLayout::for_uav(states, actions);
  MeanField initial = MeanField::uniform(layout);

  RepresentativeEnv env(phys, learner.features, initial);
  res.trainer = std::make_unique<rl::DqnTrainer>(env.feature_width(), env.num_actions(),
                                                 config.trainer, learner.rule, config.seed);
  res.trainer->set_horizon(static_cast<std::int64_t>(config.outer_iterations) *
                           config.episodes_per_iteration * config.trainer.steps_per_episode);
  res.meanfield = initial;

  const MeanFieldMap map = [&](const MeanField& mf, int k) {
    env.set_meanfield(mf);
    if (config.flush_buffer) res.trainer->flush_buffer();
    if (config.reinitialize && k > 0) res.trainer->reinitialize();
    const auto stats = res.trainer->train(env, config.episodes_per_iteration, k);
    res.episodes.insert(res.episodes.end(), stats.begin(), stats.end());
    res.episode_iteration.insert(res.episode_iteration.end(), stats.size(), k);
    res.policy = learner.propagate_with_behaviour ? res.trainer->behaviour_policy()
                                                  : res.trainer->final_policy();
    Rng rng = derive_stream(config.seed, 0x70726f70ULL, static_cast<std::uint64_t>(k));
    MeanField next = propagate_population(phys, res.policy, learner.features, mf,
                                          config.propagation, rng);
    res.meanfield = next;
    res.report.iterations = k + 1;
    return next;
  };

  FixedPointConfig fp;
  fp.max_iterations = config.outer_iterations;
  fp.tolerance = config.tolerance;
  FixedPointResult r = iterate_fixed_point(std::move(initial), map, fp);
  res.report = std::move(r.report);
  res.meanfield = std::move(r.final_meanfield);
  res.policy = res.trainer->final_policy();
}

SolveResult solve_equilibrium(const env::PhysicsConfig& phys, const LearnerSetup& learner,
                              const SolverConfig& config) {
  SolveResult res;
  solve_equilibrium(phys, learner, config, res);
  return res;
}

}  // namespace uavmf::mfg
