#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavmf/core/rng.hpp"
#include "uavmf/env/slot.hpp"

namespace uavmf::env {

// Joint simulator state: one UAV per cell. Removed UAVs stay in the vector
// with alive = 0; they neither act nor interfere.
struct WorldState {
  std::vector<AgentState> agents;
  std::vector<std::uint8_t> alive;
  std::uint64_t slot = 0;

  int num_alive() const;
};

enum class Fading {
  kRandom,  // LoS draw + Nakagami/Rayleigh small-scale fading
  kMean,    // deterministic mixture mean, for symmetry checks
};

struct WorldStep {
  std::vector<SlotOutcome> outcomes;
  std::vector<AgentAction> applied;  // after infeasible-action substitution
  int substitutions = 0;
};

bool step_demand(bool bit, const DemandChain& chain, Rng& rng);

// Fresh UAV: full battery, stationary demand, random hover point.
AgentState initial_agent(const PhysicsConfig& phys, Rng& rng);

WorldState initial_world(const PhysicsConfig& phys, Rng& rng);

// Applies the end-of-slot transition: battery queue, demand chains, hover.
void advance_agent(const PhysicsConfig& phys, AgentState& s, const AgentAction& a,
                   const SlotOutcome& outcome, Rng& rng);

// Samples every link once for the slot and evaluates all cells. Per-cell
// randomness comes from streams keyed by (one draw of rng, cell), so the
// result does not depend on the order cells are visited.
WorldStep step_world(WorldState& world, std::span<const AgentAction> actions,
                     const PhysicsConfig& phys, Rng& rng, Fading fading = Fading::kRandom);

}  // namespace uavmf::env
