#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "uavmf/core/rng.hpp"

namespace uavmf::rl {

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;
};

// Gradients share the network's layer layout.
using Gradients = std::vector<DenseLayer>;

// Fully connected Q-network: rectifier on hidden layers, identity output.
// Batches are column-major: one sample per column.
class Mlp {
 public:
  struct Tape {
    std::vector<Eigen::MatrixXd> activations;  // input, then post-activation of each layer
  };

  Mlp() = default;
  Mlp(int input, const std::vector<int>& hidden, int output, Rng& rng);

  int input_size() const { return static_cast<int>(layers_.front().weight.cols()); }
  int output_size() const { return static_cast<int>(layers_.back().weight.rows()); }
  std::size_t num_parameters() const;

  Eigen::MatrixXd forward(const Eigen::MatrixXd& x, Tape* tape = nullptr) const;
  Eigen::VectorXd forward_one(std::span<const double> x) const;

  // Backpropagates dLoss/dOutput through the network recorded in `tape`.
  Gradients backward(const Tape& tape, const Eigen::MatrixXd& grad_out) const;

  Gradients zeros_like() const;
  bool all_finite() const;

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

  // Visits parameter blocks in a fixed order (w0, b0, w1, b1, ...).
  void for_each_block(const std::function<void(std::span<double>)>& fn);
  std::vector<double> flat() const;
  void set_flat(std::span<const double> values);

 private:
  std::vector<DenseLayer> layers_;
};

void for_each_block(Gradients& grads, const std::function<void(std::span<double>)>& fn);
std::vector<double> flatten(const Gradients& grads);

}  // namespace uavmf::rl
