#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uavmf/mfg/meanfield.hpp"
#include "uavmf/mfg/micro.hpp"
#include "uavmf/mfg/propagate.hpp"
#include "uavmf/rl/tabular.hpp"
#include "uavmf/rl/trainer.hpp"

namespace uavmf::mfg {

struct EquilibriumReport {
  int iterations = 0;
  std::vector<double> distances;     // d(L_{k+1}, L_k) on the joint table
  std::vector<double> distances_if;  // same on the interference marginal
  std::vector<double> contraction_ratios;  // d_k / d_{k-1}; NaN when d_{k-1} = 0
  bool converged = false;
  // Set when a distance rises again after the transient.
  bool flagged = false;
  int best_iteration = -1;
};

struct FixedPointConfig {
  int max_iterations = 20;
  double tolerance = 1e-3;
  int transient = 3;  // leading iterations exempt from the monotonicity flag
};

// One application of L -> Y2(Y1(L), L); `iteration` counts from 0.
using MeanFieldMap = std::function<MeanField(const MeanField& current, int iteration)>;

struct FixedPointResult {
  MeanField final_meanfield;
  MeanField best_meanfield;  // iterate with the smallest step distance
  EquilibriumReport report;
};

FixedPointResult iterate_fixed_point(MeanField initial, const MeanFieldMap& map,
                                     const FixedPointConfig& config);

void write_report_csv(const EquilibriumReport& report, std::ostream& out);

// Micro instance with the tabular best response and exact propagation.
struct MicroSolveConfig {
  double gamma = 0.9;
  double phi = 0.5;
  double value_tolerance = 1e-10;
  FixedPointConfig fixed_point;
};

struct MicroEquilibrium {
  MeanField meanfield;
  std::vector<double> policy;  // soft policy rows at the last iterate
  rl::SoftValueResult values;
  EquilibriumReport report;
};

MicroEquilibrium solve_micro_equilibrium(const MicroInstance& instance, MeanField initial,
                                         const MicroSolveConfig& config);

// How the representative learns and how the population is propagated.
struct LearnerSetup {
  std::string name = "ME-MFDQN";
  rl::LearnerRule rule;
  rl::FeatureMode features = rl::FeatureMode::kCompact;
  // Propagate with the exploring policy rather than the final one.
  bool propagate_with_behaviour = false;
};

struct SolverConfig {
  rl::TrainerConfig trainer;
  int outer_iterations = 10;
  int episodes_per_iteration = 30;
  double tolerance = 1e-2;
  PropagationConfig propagation;
  bool flush_buffer = true;
  bool reinitialize = false;
  std::uint64_t seed = 1;
};

struct SolveResult {
  std::unique_ptr<rl::DqnTrainer> trainer;
  rl::Policy policy;
  std::optional<MeanField> meanfield;
  EquilibriumReport report;
  std::vector<rl::EpisodeStats> episodes;
  std::vector<int> episode_iteration;
};

// Alternates best-response training against the frozen mean-field with
// empirical population propagation, starting from the uniform mean-field.
// `out` is filled as iterations complete, so it holds the partial run when
// training divergence propagates.
void solve_equilibrium(const env::PhysicsConfig& phys, const LearnerSetup& learner,
                       const SolverConfig& config, SolveResult& out);
SolveResult solve_equilibrium(const env::PhysicsConfig& phys, const LearnerSetup& learner,
                              const SolverConfig& config);

}  // namespace uavmf::mfg
