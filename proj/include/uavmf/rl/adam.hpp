#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uavmf/rl/mlp.hpp"

namespace uavmf::rl {

struct AdamConfig {
  double lr = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update, in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               const AdamConfig& config);

// Adam over a network's parameter blocks.
class Adam {
 public:
  Adam() = default;
  Adam(const Mlp& net, AdamConfig config)
      : config_(config), state_(net.num_parameters()) {}

  void step(Mlp& net, const Gradients& grads);

  const AdamConfig& config() const { return config_; }
  AdamState& state() { return state_; }
  const AdamState& state() const { return state_; }

 private:
  AdamConfig config_;
  AdamState state_;
};

}  // namespace uavmf::rl
