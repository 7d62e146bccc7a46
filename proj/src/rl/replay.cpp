#include "uavmf/rl/replay.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace uavmf::rl {

void ReplayBuffer::push(Experience e) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(e));
  } else {
    items_[next_] = std::move(e);
  }
  next_ = (next_ + 1) % capacity_;
}

void ReplayBuffer::clear() {
  items_.clear();
  next_ = 0;
}

void ReplayBuffer::restore(std::vector<Experience> items, std::size_t cursor) {
  if (items.size() > capacity_ || cursor >= capacity_)
    throw std::invalid_argument("replay restore: inconsistent ring");
  items_ = std::move(items);
  next_ = cursor;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, Rng& rng) const {
  if (n > items_.size()) throw std::invalid_argument("minibatch larger than buffer");
  std::vector<std::size_t> idx(items_.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = std::uniform_int_distribution<std::size_t>(i, idx.size() - 1)(rng);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(n);
  return idx;
}

Minibatch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  const auto idx = sample_indices(n, rng);
  const auto width = static_cast<Eigen::Index>(items_.front().state.size());
  Minibatch b;
  b.states.resize(width, static_cast<Eigen::Index>(n));
  b.next_states.resize(width, static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Experience& e = items_[idx[i]];
    const auto col = static_cast<Eigen::Index>(i);
    b.states.col(col) = Eigen::Map<const Eigen::VectorXd>(e.state.data(), width);
    b.next_states.col(col) = Eigen::Map<const Eigen::VectorXd>(e.next_state.data(), width);
    b.actions.push_back(e.action);
    b.rewards.push_back(e.reward);
    b.next_masks.push_back(e.next_mask);
  }
  return b;
}

}  // namespace uavmf::rl
