#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "uavmf/env/channel.hpp"

namespace uavmf::env {

// Local state of one UAV: demand bits of its GUs, the hover point it ended
// the previous slot at, and its battery.
struct AgentState {
  std::uint32_t demand = 0;  // bit u set <=> GU u active
  int prev_hover = 0;
  double battery = 0.0;      // J
  int battery_level = 0;

  bool active(int gu) const { return (demand >> gu) & 1U; }
  void set_active(int gu, bool on) {
    if (on) demand |= (1U << gu);
    else demand &= ~(1U << gu);
  }
  bool operator==(const AgentState&) const = default;
};

struct AgentAction {
  std::optional<int> assoc;  // serve at most one GU
  int hover = 0;
  int power_idx = 0;

  bool operator==(const AgentAction&) const = default;
};

inline Mode mode_of(const AgentState& s, const AgentAction& a) {
  return a.hover == s.prev_hover ? Mode::kHover : Mode::kFly;
}

// Discrete state index over (demand mask, prev hover, battery level).
class StateSpace {
 public:
  StateSpace(int gus, int energy_levels) : gus_(gus), levels_(energy_levels) {}

  int gus() const { return gus_; }
  int energy_levels() const { return levels_; }
  int size() const { return (1 << gus_) * gus_ * levels_; }

  int index(std::uint32_t demand, int prev_hover, int level) const {
    return (static_cast<int>(demand) * gus_ + prev_hover) * levels_ + level;
  }
  int index(const AgentState& s) const { return index(s.demand, s.prev_hover, s.battery_level); }

  struct Decoded {
    std::uint32_t demand;
    int prev_hover;
    int level;
  };
  Decoded decode(int idx) const;

 private:
  int gus_;
  int levels_;
};

// Action index over (association slot, hover, power). A zero power index
// means no association; only association slot 0 is canonical for it, the
// other U-1 aliases are never feasible.
class ActionSpace {
 public:
  ActionSpace(int gus, int power_levels) : gus_(gus), powers_(power_levels) {}

  int gus() const { return gus_; }
  int power_levels() const { return powers_; }
  int size() const { return gus_ * gus_ * powers_; }

  int index(const AgentAction& a) const;
  AgentAction decode(int idx) const;
  bool canonical(int idx) const { return idx % powers_ != 0 || idx / (gus_ * powers_) == 0; }
  int num_canonical() const { return gus_ * (1 + gus_ * (powers_ - 1)); }
  // Stay at the current hover point without transmitting.
  int null_action(int prev_hover) const { return prev_hover * powers_; }

 private:
  int gus_;
  int powers_;
};

using ActionMask = std::vector<std::uint8_t>;

}  // namespace uavmf::env
