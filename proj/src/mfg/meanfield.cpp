#include "uavmf/mfg/meanfield.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace uavmf::mfg {

int interference_index(const InterferenceKey& key, int power_levels) {
  return ((key.hover * power_levels + key.power_idx) * 2 + (key.hovering ? 1 : 0)) * 2 +
         (key.serving_active ? 1 : 0);
}

InterferenceKey decode_interference(int idx, int power_levels) {
  InterferenceKey k;
  k.serving_active = idx % 2;
  idx /= 2;
  k.hovering = idx % 2;
  idx /= 2;
  k.power_idx = idx % power_levels;
  k.hover = idx / power_levels;
  return k;
}

std::shared_ptr<const MeanFieldLayout> MeanFieldLayout::for_uav(const env::StateSpace& states,
                                                               const env::ActionSpace& actions) {
  auto layout = std::make_shared<MeanFieldLayout>();
  layout->num_states = states.size();
  layout->num_actions = actions.size();
  layout->num_if = actions.gus() * actions.power_levels() * 4;
  layout->if_index.resize(layout->joint_size());
  layout->reachable.resize(layout->joint_size());
  for (int s = 0; s < layout->num_states; ++s) {
    const auto st = states.decode(s);
    for (int a = 0; a < layout->num_actions; ++a) {
      const env::AgentAction act = actions.decode(a);
      InterferenceKey key;
      key.hover = act.hover;
      key.power_idx = act.power_idx;
      key.hovering = act.hover == st.prev_hover;
      key.serving_active = act.assoc && ((st.demand >> *act.assoc) & 1U);
      layout->if_index[layout->cell(s, a)] = interference_index(key, actions.power_levels());
      layout->reachable[layout->cell(s, a)] = actions.canonical(a);
    }
  }
  return layout;
}

std::vector<double> push_forward_if(const MeanFieldLayout& layout, std::span<const double> joint) {
  std::vector<double> m(layout.num_if, 0.0);
  for (int c = 0; c < layout.joint_size(); ++c) m[layout.if_index[c]] += joint[c];
  return m;
}

MeanField::MeanField(std::shared_ptr<const MeanFieldLayout> layout, std::vector<double> joint)
    : layout_(std::move(layout)), joint_(std::move(joint)) {
  if (static_cast<int>(joint_.size()) != layout_->joint_size())
    throw std::invalid_argument("MeanField: table size does not match layout");
  double sum = 0.0;
  for (double v : joint_) {
    if (!(v >= 0.0)) throw std::invalid_argument("MeanField: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("MeanField: table does not sum to 1");
  marginal_if_ = push_forward_if(*layout_, joint_);
}

MeanField MeanField::uniform(std::shared_ptr<const MeanFieldLayout> layout) {
  const auto n = static_cast<double>(
      std::accumulate(layout->reachable.begin(), layout->reachable.end(), 0));
  std::vector<double> joint(layout->joint_size(), 0.0);
  for (int c = 0; c < layout->joint_size(); ++c)
    if (layout->reachable[c]) joint[c] = 1.0 / n;
  return MeanField(std::move(layout), std::move(joint));
}

MeanField MeanField::point_mass(std::shared_ptr<const MeanFieldLayout> layout, int s, int a) {
  std::vector<double> joint(layout->joint_size(), 0.0);
  joint[layout->cell(s, a)] = 1.0;
  return MeanField(std::move(layout), std::move(joint));
}

std::vector<double> MeanField::state_marginal() const {
  std::vector<double> mu(layout_->num_states, 0.0);
  for (int s = 0; s < layout_->num_states; ++s)
    for (int a = 0; a < layout_->num_actions; ++a) mu[s] += at(s, a);
  return mu;
}

std::vector<double> MeanField::action_marginal() const {
  std::vector<double> nu(layout_->num_actions, 0.0);
  for (int s = 0; s < layout_->num_states; ++s)
    for (int a = 0; a < layout_->num_actions; ++a) nu[a] += at(s, a);
  return nu;
}

MeanField empirical_meanfield(std::shared_ptr<const MeanFieldLayout> layout,
                              std::span<const std::pair<int, int>> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_meanfield: empty population");
  std::vector<double> counts(layout->joint_size(), 0.0);
  for (const auto& [s, a] : samples) counts[layout->cell(s, a)] += 1.0;
  const double n = static_cast<double>(samples.size());
  for (double& c : counts) c /= n;
  return MeanField(std::move(layout), std::move(counts));
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("distance: shape mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return std::min(1.0, 0.5 * d);
}

double distance(const MeanField& a, const MeanField& b) {
  if (a.layout().num_states != b.layout().num_states ||
      a.layout().num_actions != b.layout().num_actions)
    throw std::invalid_argument("distance: shape mismatch");
  return tv_distance(a.joint(), b.joint());
}

double distance_if(const MeanField& a, const MeanField& b) {
  return tv_distance(a.marginal_if(), b.marginal_if());
}

}  // namespace uavmf::mfg
