#pragma once

#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "uavmf/env/spaces.hpp"

namespace uavmf::mfg {

// Shape of a mean-field table plus the projection from each (state, action)
// cell onto the interference-relevant marginal.
struct MeanFieldLayout {
  int num_states = 0;
  int num_actions = 0;
  int num_if = 0;
  std::vector<int> if_index;           // per joint cell
  std::vector<std::uint8_t> reachable; // per joint cell

  int cell(int s, int a) const { return s * num_actions + a; }
  int joint_size() const { return num_states * num_actions; }

  // (hover, power level, mode-2 flag, serving-active flag) marginal of the
  // UAV state/action spaces.
  static std::shared_ptr<const MeanFieldLayout> for_uav(const env::StateSpace& states,
                                                        const env::ActionSpace& actions);
};

struct InterferenceKey {
  int hover = 0;
  int power_idx = 0;
  bool hovering = false;  // mode 2
  bool serving_active = false;
};

int interference_index(const InterferenceKey& key, int power_levels);
InterferenceKey decode_interference(int idx, int power_levels);

// Joint state-action distribution of the non-representative population.
// Immutable once built; marginal_if is always the exact push-forward.
class MeanField {
 public:
  MeanField(std::shared_ptr<const MeanFieldLayout> layout, std::vector<double> joint);

  static MeanField uniform(std::shared_ptr<const MeanFieldLayout> layout);
  static MeanField point_mass(std::shared_ptr<const MeanFieldLayout> layout, int s, int a);

  const MeanFieldLayout& layout() const { return *layout_; }
  const std::shared_ptr<const MeanFieldLayout>& layout_ptr() const { return layout_; }
  const std::vector<double>& joint() const { return joint_; }
  const std::vector<double>& marginal_if() const { return marginal_if_; }
  double at(int s, int a) const { return joint_[layout_->cell(s, a)]; }

  std::vector<double> state_marginal() const;
  std::vector<double> action_marginal() const;

 private:
  std::shared_ptr<const MeanFieldLayout> layout_;
  std::vector<double> joint_;
  std::vector<double> marginal_if_;
};

std::vector<double> push_forward_if(const MeanFieldLayout& layout, std::span<const double> joint);

// Normalised histogram of (state index, action index) samples. Throws on an
// empty population.
MeanField empirical_meanfield(std::shared_ptr<const MeanFieldLayout> layout,
                              std::span<const std::pair<int, int>> samples);

// Total variation, i.e. the l1-Wasserstein distance under the 0/1 ground metric.
double tv_distance(std::span<const double> a, std::span<const double> b);
double distance(const MeanField& a, const MeanField& b);
double distance_if(const MeanField& a, const MeanField& b);

}  // namespace uavmf::mfg
