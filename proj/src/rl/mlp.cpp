#include "uavmf/rl/mlp.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace uavmf::rl {

Mlp::Mlp(int input, const std::vector<int>& hidden, int output, Rng& rng) {
  std::vector<int> sizes{input};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(output);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    const int fan_in = sizes[i];
    const int fan_out = sizes[i + 1];
    // He initialisation for rectifier layers, Glorot-like scale on the output.
    const bool last = i + 2 == sizes.size();
    const double stddev = last ? std::sqrt(1.0 / fan_in) : std::sqrt(2.0 / fan_in);
    std::normal_distribution<double> dist(0.0, stddev);
    DenseLayer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    for (Eigen::Index c = 0; c < layer.weight.cols(); ++c)
      for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) layer.weight(r, c) = dist(rng);
    layers_.push_back(std::move(layer));
  }
}

std::size_t Mlp::num_parameters() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += l.weight.size() + l.bias.size();
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& x, Tape* tape) const {
  if (x.rows() != input_size()) throw std::invalid_argument("Mlp::forward: input width mismatch");
  if (tape) {
    tape->activations.clear();
    tape->activations.push_back(x);
  }
  Eigen::MatrixXd h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Eigen::MatrixXd z = layers_[i].weight * h;
    z.colwise() += layers_[i].bias;
    if (i + 1 < layers_.size()) z = z.cwiseMax(0.0);
    if (tape) tape->activations.push_back(z);
    h = std::move(z);
  }
  return h;
}

Eigen::VectorXd Mlp::forward_one(std::span<const double> x) const {
  const Eigen::Map<const Eigen::MatrixXd> in(x.data(), static_cast<Eigen::Index>(x.size()), 1);
  return forward(in).col(0);
}

Gradients Mlp::backward(const Tape& tape, const Eigen::MatrixXd& grad_out) const {
  Gradients grads(layers_.size());
  Eigen::MatrixXd delta = grad_out;
  for (std::size_t i = layers_.size(); i-- > 0;) {
    const Eigen::MatrixXd& input = tape.activations[i];
    grads[i].weight = delta * input.transpose();
    grads[i].bias = delta.rowwise().sum();
    if (i == 0) break;
    delta = layers_[i].weight.transpose() * delta;
    // Rectifier derivative from the stored post-activation.
    delta = delta.cwiseProduct((input.array() > 0.0).cast<double>().matrix());
  }
  return grads;
}

Gradients Mlp::zeros_like() const {
  Gradients g(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    g[i].weight = Eigen::MatrixXd::Zero(layers_[i].weight.rows(), layers_[i].weight.cols());
    g[i].bias = Eigen::VectorXd::Zero(layers_[i].bias.size());
  }
  return g;
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_)
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  return true;
}

void Mlp::for_each_block(const std::function<void(std::span<double>)>& fn) {
  rl::for_each_block(layers_, fn);
}

std::vector<double> Mlp::flat() const { return flatten(layers_); }

void Mlp::set_flat(std::span<const double> values) {
  if (values.size() != num_parameters()) throw std::invalid_argument("Mlp::set_flat: size mismatch");
  std::size_t off = 0;
  for_each_block([&](std::span<double> block) {
    std::copy(values.begin() + off, values.begin() + off + block.size(), block.begin());
    off += block.size();
  });
}

void for_each_block(Gradients& grads, const std::function<void(std::span<double>)>& fn) {
  for (auto& l : grads) {
    fn(std::span<double>(l.weight.data(), static_cast<std::size_t>(l.weight.size())));
    fn(std::span<double>(l.bias.data(), static_cast<std::size_t>(l.bias.size())));
  }
}

std::vector<double> flatten(const Gradients& grads) {
  std::vector<double> out;
  for (const auto& l : grads) {
    out.insert(out.end(), l.weight.data(), l.weight.data() + l.weight.size());
    out.insert(out.end(), l.bias.data(), l.bias.data() + l.bias.size());
  }
  return out;
}

}  // namespace uavmf::rl
