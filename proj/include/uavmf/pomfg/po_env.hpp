#pragma once

#include <utility>
#include <vector>

#include "uavmf/mfg/representative_env.hpp"
#include "uavmf/pomfg/observation.hpp"

namespace uavmf::pomfg {

// Histogram cells of the observation mean-field: (number of active beliefs,
// staleness bucket of the stalest GU, hover, power level).
struct ObservationLayout {
  int gus = 4;
  int power_levels = 5;

  static constexpr int kBuckets = 3;  // {0}, {1..4}, {5..}
  static int bucket(int staleness) { return staleness == 0 ? 0 : (staleness <= 4 ? 1 : 2); }

  int size() const { return (gus + 1) * kBuckets * gus * power_levels; }
  int index(const CompressedHistory& h, const env::AgentAction& a) const;
};

class ObservationMeanField {
 public:
  ObservationMeanField(ObservationLayout layout, std::vector<double> table);

  static ObservationMeanField uniform(ObservationLayout layout);
  // Normalised histogram of (history, action) pairs; throws when empty.
  static ObservationMeanField empirical(
      ObservationLayout layout,
      const std::vector<std::pair<CompressedHistory, env::AgentAction>>& samples);

  const ObservationLayout& layout() const { return layout_; }
  const std::vector<double>& table() const { return table_; }

 private:
  ObservationLayout layout_;
  std::vector<double> table_;
};

double distance(const ObservationMeanField& a, const ObservationMeanField& b);

// Representative UAV that sees its own battery and hover point but only the
// demand of the GUs within coverage. Dynamics and interference are those of
// the fully observable representative game; features are the compressed
// history plus the observation mean-field.
class PoEnv : public rl::Environment {
 public:
  PoEnv(env::PhysicsConfig phys, double coverage, int staleness_cap,
        ObservationMeanField obs_meanfield, mfg::MeanField interference);

  void set_observation_meanfield(ObservationMeanField mf);
  void set_interference(mfg::MeanField mf) { inner_.set_meanfield(std::move(mf)); }

  int num_actions() const override { return inner_.num_actions(); }
  int feature_width() const override;
  void reset(Rng& rng) override;
  void features(std::vector<double>& out) const override;
  rl::ActionMask feasible_mask() const override { return inner_.feasible_mask(); }
  rl::StepInfo step(int action, Rng& rng) override;

  const CompressedHistory& history() const { return history_; }
  const env::AgentState& state() const { return inner_.state(); }
  const env::AgentAction& last_action() const { return inner_.last_action(); }
  double coverage() const { return coverage_; }

 private:
  mfg::RepresentativeEnv inner_;
  double coverage_;
  int cap_;
  ObservationMeanField obs_mf_;
  CompressedHistory history_;
};

}  // namespace uavmf::pomfg
