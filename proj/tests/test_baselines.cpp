#include <doctest.h>

#include <cmath>
#include <vector>

#include "uavmf/baselines/baselines.hpp"
#include "uavmf/mfg/representative_env.hpp"

using namespace uavmf;
using namespace uavmf::baselines;

TEST_SUITE("baselines") {

TEST_CASE("epsilon-greedy") {
  Rng rng(1);
  const std::vector<double> q{0.1, 2.0, -1.0, 1.9};
  for (int i = 0; i < 1000; ++i) CHECK(epsilon_greedy_action(q, 0.0, {}, rng) == 1);
  const std::vector<double> tie{1.0, 1.0};
  CHECK(epsilon_greedy_action(tie, 0.0, {}, rng) == 0);

  SUBCASE("eps = 1 is uniform over feasible actions") {
    std::vector<int> count(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++count[epsilon_greedy_action(q, 1.0, {}, rng)];
    const double sd = std::sqrt(n * 0.25 * 0.75);
    for (int c : count) CHECK(std::abs(c - n * 0.25) < 3 * sd);
  }

  SUBCASE("mixture probability") {
    const std::vector<double> q3{5.0, 1.0, 1.0};
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += epsilon_greedy_action(q3, 0.3, {}, rng) == 0;
    CHECK(std::abs(static_cast<double>(hits) / n - 0.8) < 0.01);
  }
}

TEST_CASE("Boltzmann exploration") {
  Rng rng(2);
  const std::vector<double> q{1.0, 0.0};
  SUBCASE("two-action softmax") {
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) hits += boltzmann_action(q, 1.0, {}, rng) == 0;
    CHECK(std::abs(static_cast<double>(hits) / n - 0.7311) < 0.01);
  }
  SUBCASE("huge temperature is uniform") {
    const std::vector<double> q3{3.0, -2.0, 0.5};
    std::vector<int> count(3, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++count[boltzmann_action(q3, 1e6, {}, rng)];
    double tv = 0.0;
    for (int c : count) tv += 0.5 * std::abs(static_cast<double>(c) / n - 1.0 / 3);
    CHECK(tv < 0.01);
  }
  SUBCASE("tiny temperature is greedy") {
    const std::vector<double> q3{0.2, 0.9, 0.5};
    for (int i = 0; i < 1000; ++i) CHECK(boltzmann_action(q3, 1e-3, {}, rng) == 1);
  }
  SUBCASE("matches the soft policy at the same temperature") {
    for (int t = 0; t < 100; ++t) {
      std::vector<double> v(5);
      for (double& x : v) x = uniform01(rng) * 4 - 2;
      const double temp = 0.05 + uniform01(rng);
      const auto a = boltzmann_probabilities(v, temp, {});
      const auto b = rl::soft_policy(v, temp);
      for (int i = 0; i < 5; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(boltzmann_probabilities(q, 0.0, {}), std::invalid_argument);
}

TEST_CASE("every selector respects the feasibility mask") {
  Rng rng(3);
  const std::vector<double> q{9.0, 1.0, 8.0, 0.0};
  const rl::ActionMask mask{0, 1, 0, 1};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    REQUIRE(mask[epsilon_greedy_action(q, 0.5, mask, rng)]);
    REQUIRE(mask[boltzmann_action(q, 2.0, mask, rng)]);
    REQUIRE(mask[sample_categorical(rl::soft_policy(q, 0.7, mask), rng)]);
  }
}

TEST_CASE("learner setups") {
  const BaselineConfig cfg;
  const auto me = learner_setup(Algorithm::kMeMfdqn, cfg);
  CHECK(me.rule.exploration == rl::Exploration::kSoft);
  CHECK(me.rule.target == rl::TargetKind::kSoft);
  for (Algorithm a : {Algorithm::kBoltzMfdqn, Algorithm::kEgMfdqn, Algorithm::kEgIdqn})
    CHECK(learner_setup(a, cfg).rule.target == rl::TargetKind::kHard);
  CHECK(learner_setup(Algorithm::kBoltzMfdqn, cfg).rule.exploration == rl::Exploration::kBoltzmann);
  CHECK(learner_setup(Algorithm::kEgMfdqn, cfg).features == rl::FeatureMode::kCompact);

  const auto idqn = learner_setup(Algorithm::kEgIdqn, cfg);
  CHECK(idqn.features == rl::FeatureMode::kNone);
  env::PhysicsConfig phys;
  phys.geometry.grid_rows = phys.geometry.grid_cols = 3;
  const env::StateSpace states(4, 8);
  const env::ActionSpace actions(4, 5);
  const auto mf = mfg::MeanField::uniform(mfg::MeanFieldLayout::for_uav(states, actions));
  CHECK(mfg::RepresentativeEnv(phys, idqn.features, mf).feature_width() == 6);
  CHECK(mfg::RepresentativeEnv(phys, me.features, mf).feature_width() == 86);

  for (Algorithm a : all_algorithms()) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK_THROWS_AS(parse_algorithm("DQN"), std::invalid_argument);

  BaselineConfig bad;
  bad.epsilon.start = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = {};
  bad.temperature.end = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("baseline training is reproducible") {
  env::PhysicsConfig phys;
  phys.geometry.grid_rows = phys.geometry.grid_cols = 3;
  const env::StateSpace states(4, 8);
  const env::ActionSpace actions(4, 5);
  const auto mf = mfg::MeanField::uniform(mfg::MeanFieldLayout::for_uav(states, actions));
  rl::TrainerConfig tc;
  tc.minibatch = 16;
  tc.hidden = {16};
  tc.steps_per_episode = 20;
  for (Algorithm a : {Algorithm::kBoltzMfdqn, Algorithm::kEgMfdqn, Algorithm::kEgIdqn}) {
    const auto setup = learner_setup(a, {});
    mfg::RepresentativeEnv e1(phys, setup.features, mf), e2(phys, setup.features, mf);
    const rl::Policy p1 = train_baseline(a, e1, 5, tc, {}, 11);
    const rl::Policy p2 = train_baseline(a, e2, 5, tc, {}, 11);
    CHECK(p1.kind == rl::PolicyKind::kGreedy);
    CHECK(p1.net->flat() == p2.net->flat());
  }
}

}  // TEST_SUITE
