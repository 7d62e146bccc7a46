#pragma once

#include <string>
#include <vector>

#include "uavmf/env/spaces.hpp"
#include "uavmf/mfg/meanfield.hpp"

namespace uavmf::rl {

// kFull feeds the whole joint table, kCompact only the interference
// marginal, kNone no mean-field at all (independent learners).
enum class FeatureMode { kFull, kCompact, kNone };

FeatureMode parse_feature_mode(const std::string& s);
std::string to_string(FeatureMode mode);

// Demand bits, prev hover and battery level: U + 2 values.
int state_feature_width(int gus);
int meanfield_feature_width(FeatureMode mode, const mfg::MeanFieldLayout& layout);

void append_state_features(const env::AgentState& s, int gus, int energy_levels,
                           std::vector<double>& out);
void append_meanfield_features(const mfg::MeanField& mf, FeatureMode mode,
                               std::vector<double>& out);

std::vector<double> encode_features(const env::AgentState& s, const mfg::MeanField& mf,
                                    FeatureMode mode, int gus, int energy_levels);

}  // namespace uavmf::rl
