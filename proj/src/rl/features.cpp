#include "uavmf/rl/features.hpp"

#include <stdexcept>

namespace uavmf::rl {

FeatureMode parse_feature_mode(const std::string& s) {
  if (s == "full") return FeatureMode::kFull;
  if (s == "compact") return FeatureMode::kCompact;
  if (s == "none") return FeatureMode::kNone;
  throw std::invalid_argument("unknown feature mode: " + s);
}

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kFull: return "full";
    case FeatureMode::kCompact: return "compact";
    case FeatureMode::kNone: return "none";
  }
  return "?";
}

int state_feature_width(int gus) { return gus + 2; }

int meanfield_feature_width(FeatureMode mode, const mfg::MeanFieldLayout& layout) {
  switch (mode) {
    case FeatureMode::kFull: return layout.joint_size();
    case FeatureMode::kCompact: return layout.num_if;
    case FeatureMode::kNone: return 0;
  }
  return 0;
}

void append_state_features(const env::AgentState& s, int gus, int energy_levels,
                           std::vector<double>& out) {
  for (int u = 0; u < gus; ++u) out.push_back(s.active(u) ? 1.0 : 0.0);
  out.push_back(gus > 1 ? static_cast<double>(s.prev_hover) / (gus - 1) : 0.0);
  out.push_back((s.battery_level + 0.5) / energy_levels);
}

void append_meanfield_features(const mfg::MeanField& mf, FeatureMode mode,
                               std::vector<double>& out) {
  if (mode == FeatureMode::kFull) out.insert(out.end(), mf.joint().begin(), mf.joint().end());
  else if (mode == FeatureMode::kCompact)
    out.insert(out.end(), mf.marginal_if().begin(), mf.marginal_if().end());
}

std::vector<double> encode_features(const env::AgentState& s, const mfg::MeanField& mf,
                                    FeatureMode mode, int gus, int energy_levels) {
  std::vector<double> out;
  out.reserve(state_feature_width(gus) + meanfield_feature_width(mode, mf.layout()));
  append_state_features(s, gus, energy_levels, out);
  append_meanfield_features(mf, mode, out);
  return out;
}

}  // namespace uavmf::rl
