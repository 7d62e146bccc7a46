#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "uavmf/mfg/equilibrium.hpp"
#include "uavmf/mfg/meanfield.hpp"
#include "uavmf/mfg/micro.hpp"
#include "uavmf/mfg/propagate.hpp"
#include "uavmf/mfg/representative_env.hpp"
#include "uavmf/rl/features.hpp"

using namespace uavmf;
using namespace uavmf::mfg;

namespace {

std::shared_ptr<const MeanFieldLayout> uav_layout() {
  return MeanFieldLayout::for_uav(env::StateSpace(4, 8), env::ActionSpace(4, 5));
}

std::vector<double> random_simplex(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (double& x : v) x = -std::log(1.0 - uniform01(rng));
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (double& x : v) x /= s;
  return v;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_SUITE("mfg") {

TEST_CASE("empirical mean-field") {
  const auto layout = uav_layout();
  SUBCASE("one cell is a point mass") {
    const std::vector<std::pair<int, int>> pop(10, {17, 3});
    const MeanField mf = empirical_meanfield(layout, pop);
    CHECK(mf.at(17, 3) == 1.0);
    CHECK(distance(mf, MeanField::point_mass(layout, 17, 3)) == 0.0);
  }
  SUBCASE("two agents in distinct cells") {
    const std::vector<std::pair<int, int>> pop{{0, 1}, {5, 2}};
    const MeanField mf = empirical_meanfield(layout, pop);
    CHECK(mf.at(0, 1) == 0.5);
    CHECK(mf.at(5, 2) == 0.5);
  }
  SUBCASE("48 agents spread evenly over four actions") {
    const int acts[4] = {1, 6, 27, 79};
    std::vector<std::pair<int, int>> pop;
    for (int i = 0; i < 48; ++i) pop.emplace_back(i * 7 % layout->num_states, acts[i % 4]);
    const std::vector<double> m = empirical_meanfield(layout, pop).action_marginal();
    for (int a : acts) CHECK(m[a] == 0.25);
  }
  SUBCASE("empty population is rejected") {
    CHECK_THROWS_AS(empirical_meanfield(layout, {}), std::invalid_argument);
  }
}

TEST_CASE("mean-field tables stay normalised") {
  const auto layout = uav_layout();
  Rng rng(1);
  const MeanField u = MeanField::uniform(layout);
  CHECK(std::abs(sum(u.joint()) - 1.0) < 1e-9);
  for (std::size_t i = 0; i < u.joint().size(); ++i)
    CHECK(u.joint()[i] == (layout->reachable[i] ? u.joint()[i] : 0.0));
  for (int t = 0; t < 20; ++t) {
    std::vector<std::pair<int, int>> pop;
    for (int i = 0; i < 200; ++i)
      pop.emplace_back(std::uniform_int_distribution<int>(0, layout->num_states - 1)(rng),
                       std::uniform_int_distribution<int>(0, layout->num_actions - 1)(rng));
    const MeanField mf = empirical_meanfield(layout, pop);
    CHECK(std::abs(sum(mf.joint()) - 1.0) < 1e-9);
    CHECK(std::abs(sum(mf.marginal_if()) - 1.0) < 1e-9);
    CHECK(std::abs(sum(mf.state_marginal()) - 1.0) < 1e-9);
  }
  CHECK_THROWS_AS(MeanField(layout, std::vector<double>(3, 1.0 / 3)), std::invalid_argument);
}

TEST_CASE("interference marginal is the exact push-forward") {
  const auto layout = uav_layout();
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    std::vector<std::pair<int, int>> pop;
    for (int i = 0; i < 64; ++i)
      pop.emplace_back(std::uniform_int_distribution<int>(0, layout->num_states - 1)(rng),
                       std::uniform_int_distribution<int>(0, layout->num_actions - 1)(rng));
    const MeanField mf = empirical_meanfield(layout, pop);
    // Direct recount of the samples onto (hover, power, hovering, serving-active).
    const env::StateSpace states(4, 8);
    const env::ActionSpace actions(4, 5);
    std::vector<double> counts(layout->num_if, 0.0);
    for (auto [s, a] : pop) {
      const auto st = states.decode(s);
      const env::AgentAction act = actions.decode(a);
      InterferenceKey k{act.hover, act.power_idx, act.hover == st.prev_hover,
                        act.assoc && ((st.demand >> *act.assoc) & 1U)};
      counts[interference_index(k, 5)] += 1.0;
    }
    for (int i = 0; i < layout->num_if; ++i) CHECK(mf.marginal_if()[i] == counts[i] / 64.0);
    CHECK(push_forward_if(*layout, mf.joint()) == mf.marginal_if());
  }
}

TEST_CASE("distance") {
  const double a[] = {0.75, 0.25}, b[] = {0.25, 0.75}, c[] = {1.0, 0.0}, d[] = {0.0, 1.0};
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(c, d) == 1.0);
  CHECK(tv_distance(a, b) == doctest::Approx(0.5));
  const double e[] = {1.0};
  CHECK_THROWS_AS(tv_distance(a, e), std::invalid_argument);

  SUBCASE("metric axioms on random triples") {
    Rng rng(3);
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_simplex(12, rng), y = random_simplex(12, rng), z = random_simplex(12, rng);
      const double xy = tv_distance(x, y), yx = tv_distance(y, x);
      CHECK(xy == doctest::Approx(yx));
      CHECK(tv_distance(x, x) == 0.0);
      CHECK(xy > 0.0);
      CHECK(xy <= 1.0 + 1e-12);
      CHECK(xy <= tv_distance(x, z) + tv_distance(z, y) + 1e-12);
    }
  }
}

TEST_CASE("fixed-point driver") {
  const auto layout = uav_layout();
  const MeanField target = MeanField::point_mass(layout, 3, 2);
  SUBCASE("a constant map converges after one step and then stays put") {
    FixedPointConfig cfg;
    cfg.tolerance = 1e-12;
    int calls = 0;
    const MeanFieldMap map = [&](const MeanField&, int) {
      ++calls;
      return target;
    };
    const FixedPointResult r = iterate_fixed_point(MeanField::uniform(layout), map, cfg);
    CHECK(r.report.converged);
    CHECK(r.report.iterations == 2);
    CHECK(r.report.distances.back() == 0.0);
    CHECK(r.report.contraction_ratios.back() == 0.0);
    CHECK(distance(r.final_meanfield, target) == 0.0);
  }
  SUBCASE("budget exhaustion returns the best iterate") {
    FixedPointConfig cfg;
    cfg.max_iterations = 4;
    cfg.transient = 1;
    const MeanField other = MeanField::point_mass(layout, 4, 2);
    const MeanFieldMap flip = [&](const MeanField& cur, int) {
      return distance(cur, target) == 0.0 ? other : target;
    };
    const FixedPointResult r = iterate_fixed_point(MeanField::uniform(layout), flip, cfg);
    CHECK_FALSE(r.report.converged);
    CHECK(r.report.iterations == 4);
    CHECK(r.report.best_iteration == 0);
    CHECK(r.report.contraction_ratios.size() == 3);
  }
  SUBCASE("report csv") {
    EquilibriumReport rep;
    rep.distances = {0.5, 0.25};
    rep.distances_if = {0.4, 0.2};
    rep.contraction_ratios = {0.5};
    std::ostringstream out;
    write_report_csv(rep, out);
    CHECK(out.str() == "iteration,distance,distance_if,contraction_ratio\n0,0.5,0.4,\n1,0.25,0.2,0.5\n");
  }
}

TEST_CASE("population propagation") {
  SUBCASE("absorbing demand keeps every GU active") {
    env::PhysicsConfig phys;
    phys.geometry.grid_rows = phys.geometry.grid_cols = 5;
    phys.demand = {0.0, 1.0};
    const env::StateSpace states(4, 8);
    const env::ActionSpace actions(4, 5);
    const auto layout = MeanFieldLayout::for_uav(states, actions);
    const MeanField start = MeanField::point_mass(layout, states.index(15, 0, 7), 0);
    Rng init(4);
    auto net = std::make_shared<rl::Mlp>(
        rl::state_feature_width(4) + rl::meanfield_feature_width(rl::FeatureMode::kCompact, *layout),
        std::vector<int>{16}, actions.size(), init);
    const rl::Policy policy{net, rl::PolicyKind::kSoft, 1.0};
    Rng rng(5);
    const MeanField next =
        propagate_population(phys, policy, rl::FeatureMode::kCompact, start, {20, 10}, rng);
    const auto mu = next.state_marginal();
    double all_active = 0.0;
    for (int s = 0; s < states.size(); ++s)
      if (states.decode(s).demand == 15) all_active += mu[s];
    CHECK(all_active == doctest::Approx(1.0));
  }

  SUBCASE("removed cells do not act") {
    env::PhysicsConfig phys;
    phys.geometry.grid_rows = phys.geometry.grid_cols = 3;
    const auto layout = MeanFieldLayout::for_uav(env::StateSpace(4, 8), env::ActionSpace(4, 5));
    Rng init(6);
    auto net = std::make_shared<rl::Mlp>(6 + 80, std::vector<int>{8}, 80, init);
    PopulationSimulator sim(phys, rl::Policy{net, rl::PolicyKind::kGreedy, 0.0},
                            rl::FeatureMode::kCompact, MeanField::uniform(layout));
    Rng rng(7);
    sim.reset(rng);
    sim.world().alive[0] = 0;
    sim.step(rng);
    CHECK(sim.last_samples().size() == 7);
    CHECK(sim.last_action_indices()[0] == -1);
  }
}

TEST_CASE("micro instance") {
  const MicroInstance inst;
  CHECK(inst.states().size() == 6);
  CHECK(inst.actions().size() == 2);
  CHECK(inst.neighbours() == 8);
  const MeanField uniform = MeanField::uniform(inst.layout());

  SUBCASE("success probability falls as neighbours transmit more") {
    const auto silent = MeanField::point_mass(inst.layout(), 0, 0);
    const auto loud = MeanField::point_mass(inst.layout(), inst.states().index(1, 0, 2), 1);
    CHECK(inst.transmit_probabilities(silent).second == 0.0);
    CHECK(inst.transmit_probabilities(loud).second == 1.0);
    CHECK(inst.success_probabilities(loud).second < inst.success_probabilities(silent).second);
  }

  SUBCASE("tabular soft value iteration converges tightly") {
    const rl::TabularMdp mdp = inst.build_mdp(uniform);
    const auto r = rl::tabular_soft_value_iteration(mdp, 0.9, 0.5, 1e-12);
    CHECK(r.converged);
    CHECK(rl::bellman_residual(mdp, r.q, 0.9, 0.5) < 1e-8);
  }

  SUBCASE("transition rows are distributions") {
    const rl::TabularMdp mdp = inst.build_mdp(uniform);
    for (const auto& row : mdp.transitions) {
      double s = 0.0;
      for (auto [sp, p] : row) s += p;
      CHECK(s == doctest::Approx(1.0));
    }
  }

  SUBCASE("sampled rewards average to the expected reward") {
    const rl::TabularMdp mdp = inst.build_mdp(uniform);
    const auto [t1, t2] = inst.transmit_probabilities(uniform);
    Rng rng(8);
    for (int s = 0; s < 6; ++s) {
      for (int a = 0; a < 2; ++a) {
        if (!mdp.allowed(s, a)) continue;
        double acc = 0.0;
        const int n = 40000;
        for (int i = 0; i < n; ++i) acc += inst.sample_reward(s, a, t1, t2, rng);
        const double expected = mdp.reward[mdp.cell(s, a)] / inst.config().reward_scale;
        CHECK(acc / n == doctest::Approx(expected).epsilon(0.03));
      }
    }
  }

  SUBCASE("empirical propagation matches the exact push-forward") {
    const rl::TabularMdp mdp = inst.build_mdp(uniform);
    const auto q = rl::tabular_soft_value_iteration(mdp, 0.9, 0.5, 1e-10).q;
    const auto pi = rl::tabular_soft_policy(mdp, q, 0.5);
    Rng rng(9);
    const MeanField exact = inst.propagate_exact(uniform, pi);
    const MeanField sampled = inst.propagate_empirical(uniform, pi, 10000, rng);
    CHECK(distance(exact, sampled) < 0.05);
  }

  SUBCASE("a fixed policy reaches its stationary mean-field and then stays") {
    std::vector<double> pi(12, 0.0);
    for (int s = 0; s < 6; ++s) {
      const bool can = inst.build_mdp(uniform).allowed(s, 1);
      pi[s * 2] = can ? 0.3 : 1.0;
      pi[s * 2 + 1] = can ? 0.7 : 0.0;
    }
    FixedPointConfig cfg;
    cfg.max_iterations = 200;
    cfg.tolerance = 1e-13;
    const auto r = iterate_fixed_point(
        uniform, [&](const MeanField& m, int) { return inst.propagate_exact(m, pi); }, cfg);
    CHECK(r.report.converged);
    CHECK(distance(inst.propagate_exact(r.final_meanfield, pi), r.final_meanfield) < 1e-12);
  }
}

TEST_CASE("micro equilibrium") {
  const MicroInstance inst;
  const MicroSolveConfig cfg;
  const MicroEquilibrium a = solve_micro_equilibrium(inst, MeanField::uniform(inst.layout()), cfg);
  CHECK(a.report.converged);
  CHECK(a.report.iterations <= 20);
  CHECK(a.report.distances.back() < 1e-3);

  const MeanField loud = MeanField::point_mass(inst.layout(), inst.states().index(1, 0, 2), 1);
  const MicroEquilibrium b = solve_micro_equilibrium(inst, loud, cfg);
  CHECK(b.report.converged);
  CHECK(distance(a.meanfield, b.meanfield) < 0.02);

  SUBCASE("empirical contraction after the transient") {
    for (const auto* e : {&a, &b}) {
      int shrinking = 0, total = 0;
      for (std::size_t k = cfg.fixed_point.transient; k < e->report.contraction_ratios.size(); ++k) {
        const double r = e->report.contraction_ratios[k];
        if (std::isnan(r)) continue;
        ++total;
        shrinking += r < 1.0;
      }
      if (total > 0) CHECK(static_cast<double>(shrinking) / total >= 0.8);
    }
  }
}

}  // TEST_SUITE
