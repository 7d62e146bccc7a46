#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "uavmf/env/channel.hpp"
#include "uavmf/env/energy.hpp"
#include "uavmf/env/slot.hpp"
#include "uavmf/env/world.hpp"

using namespace uavmf;
using namespace uavmf::env;

namespace {

// Hand-written rotary-wing model used as an oracle.
struct PropulsionOracle {
  double W = 20.0, rho = 1.225, R = 0.4, A = 0.503, s = 0.05, Om = 300.0, d0 = 0.6,
         delta = 0.012, k = 0.1;

  double p0() const { return delta / 8.0 * rho * s * A * std::pow(Om * R, 3.0); }
  double pi() const { return (1.0 + k) * W * std::sqrt(W) / std::sqrt(2.0 * rho * A); }
  double v0() const { return std::sqrt(W / (2.0 * rho * A)); }
  double power(double v) const {
    const double utip = Om * R;
    const double blade = p0() * (1.0 + 3.0 * v * v / (utip * utip));
    const double r = v / v0();
    const double induced = pi() * std::sqrt(std::sqrt(1.0 + std::pow(r, 4) / 4.0) - r * r / 2.0);
    const double parasite = 0.5 * d0 * rho * s * A * v * v * v;
    return blade + induced + parasite;
  }
};

}  // namespace

TEST_SUITE("env") {

TEST_CASE("demand chain transitions") {
  Rng rng(1);
  SUBCASE("q = 1 keeps an active GU active") {
    const DemandChain c{0.3, 1.0};
    for (int i = 0; i < 1000; ++i) CHECK(step_demand(true, c, rng));
  }
  SUBCASE("p = 0 keeps an idle GU idle") {
    const DemandChain c{0.0, 0.7};
    for (int i = 0; i < 1000; ++i) CHECK_FALSE(step_demand(false, c, rng));
  }
  SUBCASE("long-run active fraction matches the stationary law") {
    const DemandChain c{0.3, 0.7};
    bool bit = false;
    long active = 0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) {
      bit = step_demand(bit, c, rng);
      active += bit;
    }
    const double oracle = 0.3 / (1.0 + 0.3 - 0.7);
    CHECK(oracle == doctest::Approx(0.5));
    CHECK(std::abs(static_cast<double>(active) / n - oracle) < 0.01);
  }
}

TEST_CASE("elevation angle") {
  CHECK(elevation_deg({0, 0, 100}, {0, 0}) == doctest::Approx(90.0));
  CHECK(elevation_deg({0, 0, 100}, {100, 0}) == doctest::Approx(45.0));
  CHECK(elevation_deg({0, 0, 100}, {500, 0}) ==
        doctest::Approx(std::atan(0.2) * 180.0 / std::numbers::pi));
  CHECK(elevation_deg({0, 0, 100}, {500, 0}) == doctest::Approx(11.31).epsilon(1e-4));
}

TEST_CASE("LoS probability") {
  const ChannelParams p;
  CHECK(std::abs(los_probability(90.0, p) - 1.0) < 1e-12);
  CHECK(los_probability(10.0 + std::log(10.0) / 0.6, p) == doctest::Approx(0.5));
  CHECK(los_probability(-1e4, p) < 1e-300);

  SUBCASE("increasing and inside (0, 1]") {
    double prev = los_probability(0.0, p);
    for (double th = 0.5; th <= 90.0; th += 0.5) {
      const double v = los_probability(th, p);
      // the logistic saturates to 1.0 in double precision above about 70 degrees
      if (th <= 60.0) CHECK(v > prev);
      CHECK(v >= prev);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("path loss at the default altitude") {
  const ChannelParams p = ChannelParams::for_altitude(100.0);
  CHECK(p.alpha_los == doctest::Approx(2.225 - 0.05 * 2.0));
  const double l = path_loss(100.0, true, p);
  CHECK(std::log10(l) == doctest::Approx(-7.942).epsilon(1e-9));
}

TEST_CASE("small-scale fading moments") {
  Rng rng(7);
  for (double m : {1.0, 2.0}) {
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_fading_power(m, 1.0, rng);
    CHECK(std::abs(sum / n - 1.0) < 0.01);
  }
}

TEST_CASE("m = 1 amplitude is Rayleigh") {
  Rng rng(11);
  const int n = 100000;
  std::vector<double> g(n);
  for (double& x : g) x = std::sqrt(sample_fading_power(1.0, 1.0, rng));
  std::sort(g.begin(), g.end());
  // Rayleigh with sigma^2 = omega / 2: F(x) = 1 - exp(-x^2 / omega).
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = 1.0 - std::exp(-g[i] * g[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / n),
                   std::abs(f - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("empirical link gain matches the LoS mixture mean") {
  const ChannelParams p = ChannelParams::for_altitude(100.0);
  Rng rng(3);
  for (double horizontal : {0.0, 250.0, 700.0}) {
    const Vec3 uav{0, 0, 100};
    const Vec2 gu{horizontal, 0};
    const double d = distance_3d(uav, gu);
    const double th = elevation_deg(uav, gu);
    const double pl = los_probability(th, p);
    const double oracle = pl * p.a_los * std::pow(d, -p.alpha_los) +
                          (1.0 - pl) * p.a_nlos * std::pow(d, -p.alpha_nlos);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += sample_link(d, th, p, rng).gain;
    CHECK(std::abs(sum / n / oracle - 1.0) < 0.02);
    CHECK(mean_link_gain(d, th, p) == doctest::Approx(oracle));
  }
}

TEST_CASE("SINR") {
  const double gain = std::pow(10.0, -7.942);
  CHECK(compute_sinr(gain, 0.05, false, {}, 1e-14) == 0.0);
  CHECK(compute_sinr(gain, 0.05, true, {}, 1e-14) == doctest::Approx(0.05 * gain / 1e-14));
  CHECK(compute_sinr(gain, 0.05, true, {}, 1e-14) == doctest::Approx(5.714e4).epsilon(1e-3));
  const std::vector<Interferer> one{{gain, 0.05, true}};
  CHECK(compute_sinr(gain, 0.05, true, one, 1e-30) == doctest::Approx(1.0));
  const std::vector<Interferer> silent{{gain, 0.05, false}};
  CHECK(compute_sinr(gain, 0.05, true, silent, 1e-14) == doctest::Approx(5.714e4).epsilon(1e-3));
}

TEST_CASE("fixed-rate transmission") {
  CHECK(achievable_rate(Mode::kFly, 0.0, 2.0, 1.0, 1e6, 25, 35) == doctest::Approx(3.5e7));
  CHECK(achievable_rate(Mode::kHover, 2.0, 2.0, 1.0, 1e6, 25, 35) == doctest::Approx(6.0e7));
  CHECK(achievable_rate(Mode::kHover, 0.5, 0.5, 1.0, 1e6, 25, 35) == 0.0);
  CHECK(achievable_rate(Mode::kFly, 0.5, 0.5, 1.0, 1e6, 25, 35) == 0.0);

  SUBCASE("hovering never lowers the rate when both phases pass") {
    for (double eta : {0.4, 1.0, 2.5}) {
      CHECK(achievable_rate(Mode::kHover, 3.0, 3.0, eta, 1e6, 25, 35) >=
            achievable_rate(Mode::kFly, 3.0, 3.0, eta, 1e6, 25, 35));
    }
  }
}

TEST_CASE("solar harvesting") {
  EnergyParams e;
  CHECK(harvest_energy(0.0, e, 60.0) == doctest::Approx(0.4 * 1.0 * 1367.0 * 60.0));
  CHECK(std::abs(harvest_energy(0.0, e, 60.0) - 32808.0) < 0.5);
  CHECK(harvest_energy(700.0, e, 60.0) == doctest::Approx(32808.0 * std::exp(-7.0)));
  CHECK(harvest_energy(700.0, e, 60.0) == doctest::Approx(29.92).epsilon(1e-3));
  e.harvest_efficiency = 0.0;
  CHECK(harvest_energy(0.0, e, 60.0) == 0.0);
}

TEST_CASE("propulsion power") {
  const PropulsionParams p;
  const PropulsionOracle o;
  CHECK(p.blade_profile_hover() == doctest::Approx(o.p0()));
  CHECK(p.induced_hover() == doctest::Approx(o.pi()));
  CHECK(o.p0() == doctest::Approx(79.86).epsilon(1e-3));
  CHECK(o.pi() == doctest::Approx(88.63).epsilon(1e-3));
  CHECK(std::abs(propulsion_power(0.0, p) - 168.49) < 0.01);
  CHECK(propulsion_power(0.0, p) == p.blade_profile_hover() + p.induced_hover());

  SUBCASE("forward flight at 40 m/s") {
    const double blade = o.p0() * (1.0 + 3.0 * 1600.0 / (300.0 * 300.0 * 0.4 * 0.4));
    const double parasite = 0.5 * 0.6 * 1.225 * 0.05 * 0.503 * 64000.0;
    CHECK(blade == doctest::Approx(106.5).epsilon(1e-3));
    CHECK(parasite == doctest::Approx(591.5).epsilon(1e-3));
    CHECK(std::abs(propulsion_power(40.0, p) / o.power(40.0) - 1.0) < 0.01);
  }

  SUBCASE("parasite term is cubic") {
    const double v = 10.0;
    const auto parasite = [&](double x) {
      PropulsionParams q = p;
      const double total = propulsion_power(x, q);
      q.fuselage_drag_ratio = 0.0;
      return total - propulsion_power(x, q);
    };
    CHECK(parasite(2 * v) / parasite(v) == doctest::Approx(8.0));
  }

  SUBCASE("continuous on [0, 60]") {
    double prev = propulsion_power(0.0, p);
    for (double v = 0.01; v <= 60.0; v += 0.01) {
      const double cur = propulsion_power(v, p);
      // the slope stays below 110 W per m/s on this range
      CHECK(std::abs(cur - prev) < 1.1);
      prev = cur;
    }
  }
}

TEST_CASE("slot energy") {
  EnergyParams e;
  const double ph = hover_power(e.propulsion);
  CHECK(total_energy(Mode::kHover, 0.05, 0.0, e, 25, 35) == doctest::Approx((ph + 0.06) * 60));
  CHECK(std::abs(total_energy(Mode::kHover, 0.05, 0.0, e, 25, 35) - 10113.0) < 1.0);

  SUBCASE("flying costs more than hovering at the same power") {
    const Geometry g;
    const double v = std::hypot(g.cell_side, g.cell_side) / 25.0;
    for (double p : e.power_levels)
      CHECK(total_energy(Mode::kFly, p, v, e, 25, 35) > total_energy(Mode::kHover, p, 0, e, 25, 35));
  }

  SUBCASE("silent radio hover draws only propulsion") {
    e.circuit_power = 0.0;
    CHECK(total_energy(Mode::kHover, 0.0, 0.0, e, 25, 35) == doctest::Approx(ph * 60));
  }
}

TEST_CASE("battery queue") {
  CHECK(step_battery(5e5, 0.0, 100.0, 5e5) == 5e5);
  CHECK(step_battery(100.0, 250.0, 30.0, 5e5) == 30.0);
  CHECK(step_battery(5e5, 10113.0, 32808.0, 6e5) == doctest::Approx(5.22695e5));
  CHECK(step_battery(5e5, 10113.0, 32808.0, 5e5) == 5e5);

  SUBCASE("stays in [0, e_max] under fuzzing") {
    Rng rng(5);
    std::uniform_real_distribution<double> use(0.0, 60000.0), harvest(0.0, 33000.0);
    double e = 5e5;
    for (int i = 0; i < 100000; ++i) {
      e = step_battery(e, use(rng), harvest(rng), 5e5);
      REQUIRE(e >= 0.0);
      REQUIRE(e <= 5e5);
      const int level = battery_level(e, 5e5, 8);
      REQUIRE(level >= 0);
      REQUIRE(level < 8);
    }
  }
}

TEST_CASE("reward") {
  const RewardParams r{240.0, 0.001};
  const RewardTerms none = reward(5933.0, 0.0, Mode::kHover, 5e5, 10000.0, r, 5e4, 25, 35);
  CHECK(none.value == 5933.0);
  const RewardTerms hover = reward(5933.0, 0.05, Mode::kHover, 5e5, 10113.0, r, 5e4, 25, 35);
  CHECK(hover.value == doctest::Approx(5933.0 - 240.0 * 0.05 * 60.0));
  CHECK(hover.value == doctest::Approx(5213.0));
  const RewardTerms fly = reward(5933.0, 0.05, Mode::kFly, 5e5, 10113.0, r, 5e4, 25, 35);
  CHECK(fly.interference_penalty == doctest::Approx(240.0 * 0.05 * 35.0));
  const RewardTerms alarm = reward(0.0, 0.0, Mode::kHover, 1000.0, 1000.0, {240.0, 1.0}, 100.0, 25, 35);
  CHECK(alarm.energy_penalty == doctest::Approx(100.0));

  SUBCASE("equals EE when silent with slack") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
      const double ee = uniform01(rng) * 1e4;
      const double e = 1e5 + uniform01(rng) * 4e5;
      const double used = uniform01(rng) * (e - 5e4);
      CHECK(reward(ee, 0.0, Mode::kFly, e, used, r, 5e4, 25, 35).value == ee);
    }
  }
}

TEST_CASE("action and state indexing") {
  const ActionSpace space(4, 5);
  int canonical = 0;
  for (int i = 0; i < space.size(); ++i) {
    const AgentAction a = space.decode(i);
    if (!space.canonical(i)) continue;
    ++canonical;
    CHECK(space.index(a) == i);
    CHECK(a.assoc.has_value() == (a.power_idx > 0));
  }
  CHECK(canonical == space.num_canonical());
  CHECK(space.decode(space.null_action(2)) == AgentAction{std::nullopt, 2, 0});

  const StateSpace states(4, 8);
  for (int s = 0; s < states.size(); ++s) {
    const auto d = states.decode(s);
    CHECK(states.index(d.demand, d.prev_hover, d.level) == s);
  }
}

TEST_CASE("feasibility mask") {
  PhysicsConfig phys;
  const ActionSpace space(4, 5);
  AgentState s;
  s.prev_hover = 1;
  s.battery = phys.energy.battery_max;
  ActionMask full = feasible_mask(phys, space, s);
  for (int i = 0; i < space.size(); ++i) CHECK(static_cast<bool>(full[i]) == space.canonical(i));

  s.battery = 1.0;
  const ActionMask empty = feasible_mask(phys, space, s);
  CHECK(std::count(empty.begin(), empty.end(), 1) == 1);
  CHECK(empty[space.null_action(1)] == 1);
}

TEST_CASE("world stepping") {
  SUBCASE("single cell sees no interference") {
    PhysicsConfig phys;
    phys.geometry.grid_rows = phys.geometry.grid_cols = 1;
    phys.demand = {1.0, 1.0};
    Rng rng(1);
    WorldState w = initial_world(phys, rng);
    const ActionSpace space(4, 5);
    const int h = w.agents[0].prev_hover;
    const std::vector<AgentAction> acts{{h, h, 1}};
    const WorldStep st = step_world(w, acts, phys, rng, Fading::kMean);
    const double gain = mean_link_gain(100.0, 90.0, phys.channel);
    CHECK(st.outcomes[0].sinr2 == doctest::Approx(0.05 * gain / phys.link.noise));
    CHECK(st.outcomes[0].sinr1 == doctest::Approx(st.outcomes[0].sinr2));
  }

  SUBCASE("mirror-symmetric neighbours get equal SINR") {
    PhysicsConfig phys;
    phys.geometry.grid_rows = 1;
    phys.geometry.grid_cols = 2;
    phys.demand = {1.0, 1.0};
    Rng rng(2);
    WorldState w = initial_world(phys, rng);
    w.agents[0].prev_hover = 1;
    w.agents[1].prev_hover = 0;
    const std::vector<AgentAction> acts{{1, 1, 2}, {0, 0, 2}};
    const WorldStep st = step_world(w, acts, phys, rng, Fading::kMean);
    CHECK(st.outcomes[0].sinr2 == doctest::Approx(st.outcomes[1].sinr2).epsilon(1e-12));
    CHECK(st.outcomes[0].sinr1 == doctest::Approx(st.outcomes[1].sinr1).epsilon(1e-12));
  }

  SUBCASE("transmitting neighbours lower the mean SINR") {
    PhysicsConfig phys;
    phys.demand = {1.0, 1.0};
    const int cells = phys.geometry.num_cells();
    const int rep = phys.geometry.centre_cell();
    double quiet = 0.0, loud = 0.0;
    for (bool others : {false, true}) {
      Rng rng(3);
      WorldState w = initial_world(phys, rng);
      double sum = 0.0;
      for (int t = 0; t < 1000; ++t) {
        std::vector<AgentAction> acts(cells);
        for (int k = 0; k < cells; ++k) {
          const int h = w.agents[k].prev_hover;
          acts[k] = (k == rep || others) ? AgentAction{h, h, 1} : AgentAction{std::nullopt, h, 0};
          w.agents[k].battery = phys.energy.battery_max;
        }
        sum += step_world(w, acts, phys, rng).outcomes[rep].sinr2;
      }
      (others ? loud : quiet) = sum / 1000;
    }
    CHECK(loud < quiet);
  }

  SUBCASE("infeasible actions are replaced by the null action") {
    PhysicsConfig phys;
    phys.geometry.grid_rows = phys.geometry.grid_cols = 1;
    Rng rng(4);
    WorldState w = initial_world(phys, rng);
    w.agents[0].battery = 1.0;
    const int h = w.agents[0].prev_hover;
    const std::vector<AgentAction> acts{{0, (h + 1) % 4, 4}};
    const WorldStep st = step_world(w, acts, phys, rng);
    CHECK(st.substitutions == 1);
    CHECK(st.outcomes[0].substituted);
    CHECK(st.applied[0] == AgentAction{std::nullopt, h, 0});
  }

  SUBCASE("bit-reproducible under a fixed seed") {
    PhysicsConfig phys;
    const auto run = [&] {
      Rng rng(99);
      WorldState w = initial_world(phys, rng);
      std::vector<double> trace;
      const ActionSpace space(4, 5);
      for (int t = 0; t < 50; ++t) {
        std::vector<AgentAction> acts;
        for (int k = 0; k < phys.geometry.num_cells(); ++k)
          acts.push_back(space.decode(static_cast<int>((t * 7 + k * 13) % space.num_canonical())));
        for (auto& a : acts)
          if (a.power_idx == 0) a.assoc.reset();
        for (const auto& o : step_world(w, acts, phys, rng).outcomes) trace.push_back(o.reward);
        for (const auto& a : w.agents) trace.push_back(a.battery);
      }
      return trace;
    };
    CHECK(run() == run());
  }

  SUBCASE("batteries stay in range along a long rollout") {
    PhysicsConfig phys;
    phys.geometry.grid_rows = phys.geometry.grid_cols = 3;
    Rng rng(12);
    WorldState w = initial_world(phys, rng);
    const ActionSpace space(4, 5);
    for (int t = 0; t < 3000; ++t) {
      std::vector<AgentAction> acts;
      for (int k = 0; k < 9; ++k) {
        AgentAction a = space.decode(std::uniform_int_distribution<int>(0, space.size() - 1)(rng));
        if (a.power_idx == 0) a.assoc.reset();
        acts.push_back(a);
      }
      step_world(w, acts, phys, rng);
      for (const auto& a : w.agents) {
        REQUIRE(a.battery >= 0.0);
        REQUIRE(a.battery <= phys.energy.battery_max);
        REQUIRE(a.battery_level == battery_level(a.battery, phys.energy.battery_max, 8));
      }
    }
  }
}

}  // TEST_SUITE
