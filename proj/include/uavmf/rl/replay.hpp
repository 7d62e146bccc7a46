#pragma once

#include <cstddef>
#include <vector>

#include "uavmf/core/rng.hpp"
#include "uavmf/rl/softq.hpp"

namespace uavmf::rl {

struct Experience {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  ActionMask next_mask;
  int meanfield_tag = 0;  // outer iteration whose mean-field produced it
};

// Fixed-capacity ring; minibatches are drawn uniformly without replacement.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = 1000) : capacity_(capacity) {}

  void push(Experience e);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  void clear();

  std::vector<std::size_t> sample_indices(std::size_t n, Rng& rng) const;
  Minibatch sample(std::size_t n, Rng& rng) const;

  const Experience& at(std::size_t i) const { return items_[i]; }
  std::size_t cursor() const { return next_; }
  // Reinstates a saved ring (checkpoint restore).
  void restore(std::vector<Experience> items, std::size_t cursor);

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Experience> items_;
};

}  // namespace uavmf::rl
