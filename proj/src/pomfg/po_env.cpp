#include "uavmf/pomfg/po_env.hpp"

#include <cmath>
#include <stdexcept>

namespace uavmf::pomfg {

int ObservationLayout::index(const CompressedHistory& h, const env::AgentAction& a) const {
  const int count = h.active_beliefs();
  const int b = bucket(h.max_staleness());
  return ((count * kBuckets + b) * gus + a.hover) * power_levels + a.power_idx;
}

ObservationMeanField::ObservationMeanField(ObservationLayout layout, std::vector<double> table)
    : layout_(layout), table_(std::move(table)) {
  if (static_cast<int>(table_.size()) != layout_.size())
    throw std::invalid_argument("observation mean-field: table size does not match layout");
  double sum = 0.0;
  for (double v : table_) {
    if (!(v >= 0.0)) throw std::invalid_argument("observation mean-field: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("observation mean-field: table does not sum to 1");
}

ObservationMeanField ObservationMeanField::uniform(ObservationLayout layout) {
  return ObservationMeanField(layout, std::vector<double>(layout.size(), 1.0 / layout.size()));
}

ObservationMeanField ObservationMeanField::empirical(
    ObservationLayout layout,
    const std::vector<std::pair<CompressedHistory, env::AgentAction>>& samples) {
  if (samples.empty()) throw std::invalid_argument("observation mean-field: empty population");
  std::vector<double> t(layout.size(), 0.0);
  for (const auto& [h, a] : samples) t[layout.index(h, a)] += 1.0;
  for (double& v : t) v /= static_cast<double>(samples.size());
  return ObservationMeanField(layout, std::move(t));
}

double distance(const ObservationMeanField& a, const ObservationMeanField& b) {
  if (a.layout().size() != b.layout().size())
    throw std::invalid_argument("distance: shape mismatch");
  return mfg::tv_distance(a.table(), b.table());
}

PoEnv::PoEnv(env::PhysicsConfig phys, double coverage, int staleness_cap,
             ObservationMeanField obs_meanfield, mfg::MeanField interference)
    : inner_(std::move(phys), rl::FeatureMode::kNone, std::move(interference)),
      coverage_(coverage),
      cap_(staleness_cap),
      obs_mf_(std::move(obs_meanfield)),
      history_(CompressedHistory::initial(inner_.states().gus(), staleness_cap)) {
  observed_count(coverage_, inner_.states().gus());
}

void PoEnv::set_observation_meanfield(ObservationMeanField mf) {
  if (mf.layout().size() != obs_mf_.layout().size())
    throw std::invalid_argument("observation mean-field shape changed");
  obs_mf_ = std::move(mf);
}

int PoEnv::feature_width() const {
  return history_feature_width(inner_.states().gus()) + obs_mf_.layout().size();
}

void PoEnv::reset(Rng& rng) {
  inner_.reset(rng);
  const env::AgentState& s = inner_.state();
  history_ = update_history(CompressedHistory::initial(inner_.states().gus(), cap_),
                            observe(s, s.prev_hover, coverage_, inner_.physics().geometry));
}

void PoEnv::features(std::vector<double>& out) const {
  out.clear();
  append_history_features(history_, inner_.states().energy_levels(), out);
  out.insert(out.end(), obs_mf_.table().begin(), obs_mf_.table().end());
}

rl::StepInfo PoEnv::step(int action, Rng& rng) {
  const rl::StepInfo info = inner_.step(action, rng);
  const env::AgentState& s = inner_.state();
  history_ = update_history(history_, observe(s, s.prev_hover, coverage_, inner_.physics().geometry));
  return info;
}

}  // namespace uavmf::pomfg
