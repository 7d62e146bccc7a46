#include "uavmf/env/world.hpp"

#include <algorithm>
#include <stdexcept>

namespace uavmf::env {

int WorldState::num_alive() const {
  return static_cast<int>(std::count(alive.begin(), alive.end(), std::uint8_t{1}));
}

bool step_demand(bool bit, const DemandChain& chain, Rng& rng) {
  return uniform01(rng) < (bit ? chain.q : chain.p);
}

AgentState initial_agent(const PhysicsConfig& phys, Rng& rng) {
  AgentState s;
  const int gus = phys.geometry.gus_per_cell();
  const double pi_active = phys.demand.stationary_active();
  for (int u = 0; u < gus; ++u) s.set_active(u, uniform01(rng) < pi_active);
  s.prev_hover = std::uniform_int_distribution<int>(0, gus - 1)(rng);
  s.battery = phys.energy.battery_max;
  s.battery_level =
      battery_level(s.battery, phys.energy.battery_max, phys.energy.energy_levels);
  return s;
}

WorldState initial_world(const PhysicsConfig& phys, Rng& rng) {
  WorldState w;
  const int cells = phys.geometry.num_cells();
  w.agents.reserve(cells);
  for (int k = 0; k < cells; ++k) w.agents.push_back(initial_agent(phys, rng));
  w.alive.assign(cells, 1);
  return w;
}

void advance_agent(const PhysicsConfig& phys, AgentState& s, const AgentAction& a,
                   const SlotOutcome& outcome, Rng& rng) {
  s.battery = step_battery(s.battery, outcome.e_total, outcome.harvest, phys.energy.battery_max);
  s.battery_level =
      battery_level(s.battery, phys.energy.battery_max, phys.energy.energy_levels);
  for (int u = 0; u < phys.geometry.gus_per_cell(); ++u)
    s.set_active(u, step_demand(s.active(u), phys.demand, rng));
  s.prev_hover = a.hover;
}

namespace {

double draw_cloud(const EnergyParams& e, Rng& rng) {
  if (e.cloud_levels.empty()) return 0.0;
  const auto n = static_cast<int>(e.cloud_levels.size());
  return e.cloud_levels[std::uniform_int_distribution<int>(0, n - 1)(rng)];
}

double link_gain(const Vec3& uav, const Vec2& gu, const ChannelParams& ch, Fading fading,
                 Rng& rng) {
  const double d = distance_3d(uav, gu);
  const double theta = elevation_deg(uav, gu);
  if (fading == Fading::kMean) return mean_link_gain(d, theta, ch);
  return sample_link(d, theta, ch, rng).gain;
}

bool action_valid(const ActionSpace& space, const AgentAction& a) {
  if (a.hover < 0 || a.hover >= space.gus()) return false;
  if (a.power_idx < 0 || a.power_idx >= space.power_levels()) return false;
  if (a.power_idx > 0 && (!a.assoc || *a.assoc < 0 || *a.assoc >= space.gus())) return false;
  return true;
}

}  // namespace

WorldStep step_world(WorldState& world, std::span<const AgentAction> actions,
                     const PhysicsConfig& phys, Rng& rng, Fading fading) {
  const Geometry& geo = phys.geometry;
  const int cells = geo.num_cells();
  if (static_cast<int>(actions.size()) != cells || static_cast<int>(world.agents.size()) != cells)
    throw std::invalid_argument("step_world: one action per cell required");

  const ActionSpace space(geo.gus_per_cell(), phys.energy.num_power_levels());
  const std::uint64_t base = rng();

  WorldStep out;
  out.outcomes.assign(cells, SlotOutcome{});
  out.applied.assign(actions.begin(), actions.end());

  for (int k = 0; k < cells; ++k) {
    if (!world.alive[k]) continue;
    AgentAction& a = out.applied[k];
    const AgentState& s = world.agents[k];
    if (!action_valid(space, a) || action_energy(phys, s, a) > s.battery) {
      a = space.decode(space.null_action(s.prev_hover));
      out.outcomes[k].substituted = true;
      ++out.substitutions;
    }
    if (a.power_idx == 0) a.assoc.reset();
  }

  std::vector<std::uint8_t> tx1(cells, 0), tx2(cells, 0);
  for (int k = 0; k < cells; ++k) {
    if (!world.alive[k]) continue;
    tx1[k] = radiates(world.agents[k], out.applied[k], 1);
    tx2[k] = radiates(world.agents[k], out.applied[k], 2);
  }

  std::vector<Rng> streams;
  streams.reserve(cells);
  for (int k = 0; k < cells; ++k) streams.push_back(derive_stream(base, k));

  std::vector<Interferer> phase1, phase2;
  for (int k = 0; k < cells; ++k) {
    if (!world.alive[k]) continue;
    Rng& r = streams[k];
    const AgentState& s = world.agents[k];
    const AgentAction& a = out.applied[k];
    const bool substituted = out.outcomes[k].substituted;
    const double cloud = draw_cloud(phys.energy, r);
    double own_gain = 0.0;
    phase1.clear();
    phase2.clear();
    if (a.assoc) {
      const Vec2 gu = geo.gu_position(k, *a.assoc);
      own_gain = link_gain(geo.hover_position(k, a.hover), gu, phys.channel, fading, r);
      for (int j = 0; j < cells; ++j) {
        if (j == k || !tx2[j]) continue;
        const double g =
            link_gain(geo.hover_position(j, out.applied[j].hover), gu, phys.channel, fading, r);
        const double p = phys.energy.power_levels[out.applied[j].power_idx];
        phase2.push_back({g, p, true});
        if (tx1[j]) phase1.push_back({g, p, true});
      }
    }
    out.outcomes[k] = evaluate_slot(phys, s, a, own_gain, phase1, phase2, cloud);
    out.outcomes[k].substituted = substituted;
  }

  for (int k = 0; k < cells; ++k) {
    if (!world.alive[k]) continue;
    advance_agent(phys, world.agents[k], out.applied[k], out.outcomes[k], streams[k]);
  }
  ++world.slot;
  return out;
}

}  // namespace uavmf::env
