#include "uavmf/rl/policy.hpp"

#include "uavmf/baselines/exploration.hpp"

namespace uavmf::rl {

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kSoft: return "soft";
    case PolicyKind::kGreedy: return "greedy";
    case PolicyKind::kEpsilonGreedy: return "epsilon-greedy";
    case PolicyKind::kBoltzmann: return "boltzmann";
  }
  return "?";
}

std::vector<double> Policy::q_values(std::span<const double> features) const {
  const Eigen::VectorXd q = net->forward_one(features);
  return {q.data(), q.data() + q.size()};
}

std::vector<double> Policy::probabilities(std::span<const double> q, const ActionMask& mask) const {
  switch (kind) {
    case PolicyKind::kSoft: return soft_policy(q, param, mask);
    case PolicyKind::kBoltzmann: return baselines::boltzmann_probabilities(q, param, mask);
    case PolicyKind::kGreedy: return soft_policy(q, 0.0, mask);
    case PolicyKind::kEpsilonGreedy: {
      std::vector<double> p(q.size(), 0.0);
      int feasible = 0;
      for (std::size_t a = 0; a < q.size(); ++a) feasible += mask.empty() || mask[a];
      for (std::size_t a = 0; a < q.size(); ++a)
        if (mask.empty() || mask[a]) p[a] = param / feasible;
      p[greedy_action(q, mask)] += 1.0 - param;
      return p;
    }
  }
  return {};
}

int Policy::act_on_q(std::span<const double> q, const ActionMask& mask, Rng& rng) const {
  switch (kind) {
    case PolicyKind::kGreedy: return greedy_action(q, mask);
    case PolicyKind::kEpsilonGreedy: return baselines::epsilon_greedy_action(q, param, mask, rng);
    case PolicyKind::kBoltzmann: return baselines::boltzmann_action(q, param, mask, rng);
    case PolicyKind::kSoft: {
      const auto p = soft_policy(q, param, mask);
      return baselines::sample_categorical(p, rng);
    }
  }
  return 0;
}

int Policy::act(std::span<const double> features, const ActionMask& mask, Rng& rng) const {
  const auto q = q_values(features);
  return act_on_q(q, mask, rng);
}

int Policy::greedy(std::span<const double> features, const ActionMask& mask) const {
  return greedy_action(q_values(features), mask);
}

}  // namespace uavmf::rl
