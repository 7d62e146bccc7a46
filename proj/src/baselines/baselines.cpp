#include "uavmf/baselines/baselines.hpp"

#include <random>
#include <stdexcept>

namespace uavmf::baselines {

int sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  int last = -1;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last = static_cast<int>(i);
    if (u < cum) return last;
  }
  if (last < 0) throw std::invalid_argument("sample_categorical: no positive mass");
  return last;
}

int epsilon_greedy_action(std::span<const double> q, double eps, const ActionMask& mask, Rng& rng) {
  if (uniform01(rng) < eps) {
    std::vector<int> feasible;
    for (std::size_t a = 0; a < q.size(); ++a)
      if (mask.empty() || mask[a]) feasible.push_back(static_cast<int>(a));
    if (feasible.empty()) throw std::invalid_argument("epsilon_greedy_action: no feasible action");
    const auto n = static_cast<int>(feasible.size());
    return feasible[std::uniform_int_distribution<int>(0, n - 1)(rng)];
  }
  return rl::greedy_action(q, mask);
}

std::vector<double> boltzmann_probabilities(std::span<const double> q, double temperature,
                                            const ActionMask& mask) {
  if (!(temperature > 0.0)) throw std::invalid_argument("Boltzmann temperature must be > 0");
  return rl::soft_policy(q, temperature, mask);
}

int boltzmann_action(std::span<const double> q, double temperature, const ActionMask& mask,
                     Rng& rng) {
  return sample_categorical(boltzmann_probabilities(q, temperature, mask), rng);
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kMeMfdqn: return "ME-MFDQN";
    case Algorithm::kBoltzMfdqn: return "BOLTZ-MFDQN";
    case Algorithm::kEgMfdqn: return "EG-MFDQN";
    case Algorithm::kEgIdqn: return "EG-IDQN";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& s) {
  for (Algorithm a : all_algorithms())
    if (s == to_string(a)) return a;
  throw std::invalid_argument("unknown algorithm: " + s);
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> kAll = {Algorithm::kMeMfdqn, Algorithm::kBoltzMfdqn,
                                              Algorithm::kEgMfdqn, Algorithm::kEgIdqn};
  return kAll;
}

void BaselineConfig::validate() const {
  for (double e : {epsilon.start, epsilon.end})
    if (!(e >= 0.0 && e <= 1.0)) throw std::invalid_argument("epsilon must lie in [0, 1]");
  for (double t : {temperature.start, temperature.end})
    if (!(t > 0.0)) throw std::invalid_argument("temperature must be > 0");
  if (!(entropy.start > 0.0 && entropy.end > 0.0))
    throw std::invalid_argument("entropy weight must be > 0");
}

mfg::LearnerSetup learner_setup(Algorithm algorithm, const BaselineConfig& config) {
  config.validate();
  mfg::LearnerSetup s;
  s.name = to_string(algorithm);
  s.features = config.meanfield_features;
  switch (algorithm) {
    case Algorithm::kMeMfdqn:
      s.rule = {rl::Exploration::kSoft, rl::TargetKind::kSoft, config.entropy};
      break;
    case Algorithm::kBoltzMfdqn:
      s.rule = {rl::Exploration::kBoltzmann, rl::TargetKind::kHard, config.temperature};
      break;
    case Algorithm::kEgMfdqn:
      s.rule = {rl::Exploration::kEpsilonGreedy, rl::TargetKind::kHard, config.epsilon};
      break;
    case Algorithm::kEgIdqn:
      s.rule = {rl::Exploration::kEpsilonGreedy, rl::TargetKind::kHard, config.epsilon};
      s.features = rl::FeatureMode::kNone;
      s.propagate_with_behaviour = true;
      break;
  }
  return s;
}

rl::Policy train_baseline(Algorithm algorithm, rl::Environment& env, int episodes,
                          const rl::TrainerConfig& trainer, const BaselineConfig& config,
                          std::uint64_t seed) {
  const mfg::LearnerSetup setup = learner_setup(algorithm, config);
  rl::DqnTrainer t(env.feature_width(), env.num_actions(), trainer, setup.rule, seed);
  t.set_horizon(static_cast<std::int64_t>(episodes) * trainer.steps_per_episode);
  t.train(env, episodes);
  return t.greedy_policy();
}

}  // namespace uavmf::baselines
