#include "uavmf/env/spaces.hpp"

#include <stdexcept>

namespace uavmf::env {

StateSpace::Decoded StateSpace::decode(int idx) const {
  Decoded d;
  d.level = idx % levels_;
  idx /= levels_;
  d.prev_hover = idx % gus_;
  d.demand = static_cast<std::uint32_t>(idx / gus_);
  return d;
}

int ActionSpace::index(const AgentAction& a) const {
  if (a.hover < 0 || a.hover >= gus_ || a.power_idx < 0 || a.power_idx >= powers_)
    throw std::out_of_range("action component out of range");
  if (a.power_idx == 0) return a.hover * powers_;
  if (!a.assoc) throw std::invalid_argument("transmit power without association");
  if (*a.assoc < 0 || *a.assoc >= gus_) throw std::out_of_range("association out of range");
  return (*a.assoc * gus_ + a.hover) * powers_ + a.power_idx;
}

AgentAction ActionSpace::decode(int idx) const {
  AgentAction a;
  a.power_idx = idx % powers_;
  idx /= powers_;
  a.hover = idx % gus_;
  if (a.power_idx > 0) a.assoc = idx / gus_;
  return a;
}

}  // namespace uavmf::env
