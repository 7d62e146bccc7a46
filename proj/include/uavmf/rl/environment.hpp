#pragma once

#include <vector>

#include "uavmf/core/rng.hpp"
#include "uavmf/rl/softq.hpp"

namespace uavmf::rl {

struct StepInfo {
  double reward = 0.0;  // raw, unscaled
  double ee = 0.0;
  double interference_penalty = 0.0;
  double power_w = 0.0;
  bool flew = false;
  bool substituted = false;
};

// The representative agent's view of a slot-based environment: encoded
// features of the current (state, mean-field), the feasible action set and
// one-slot transitions.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int num_actions() const = 0;
  virtual int feature_width() const = 0;
  virtual void reset(Rng& rng) = 0;
  virtual void features(std::vector<double>& out) const = 0;
  virtual ActionMask feasible_mask() const = 0;
  virtual StepInfo step(int action, Rng& rng) = 0;
};

}  // namespace uavmf::rl
