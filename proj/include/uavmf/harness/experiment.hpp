#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "uavmf/harness/config.hpp"
#include "uavmf/mfg/equilibrium.hpp"
#include "uavmf/pomfg/po_env.hpp"

namespace uavmf::harness {

// One evaluation slot of the representative UAV.
struct EvalRecord {
  int episode = 0;
  int slot = 0;
  int prev_hover = 0;
  int hover = 0;
  int assoc = -1;
  int power_idx = 0;
  double power_mw = 0.0;
  double reward = 0.0;
  double ee = 0.0;
  double interference_penalty = 0.0;
};

struct EvalSummary {
  double mean_reward = 0.0;
  double mean_ee = 0.0;
  double mean_interference_penalty = 0.0;
  double flying_probability = 0.0;  // slots with hover != prev_hover
  double mean_power_mw = 0.0;
  int slots = 0;
};

EvalSummary summarize(const std::vector<EvalRecord>& records);

// Means over the last `window` training episodes.
struct TrainingSummary {
  double mean_reward = 0.0;
  double mean_ee = 0.0;
  double mean_interference_penalty = 0.0;
  double flying_probability = 0.0;
  double mean_power_mw = 0.0;
  int episodes = 0;
};

TrainingSummary summarize_training(const std::vector<rl::EpisodeStats>& episodes, int window);

// Everything a run produces, before anything is written.
struct RunResult {
  ExperimentConfig config;
  std::vector<rl::EpisodeStats> episodes;
  std::vector<int> episode_iteration;
  mfg::EquilibriumReport report;
  std::unique_ptr<rl::DqnTrainer> trainer;
  rl::Policy policy;
  std::optional<mfg::MeanField> meanfield;
  std::optional<pomfg::ObservationMeanField> obs_meanfield;
  std::vector<EvalRecord> eval;
  EvalSummary eval_summary;
  TrainingSummary training_summary;
  bool diverged = false;
  std::string error;
};

// Solves the configured game (full or partial observability) and evaluates
// the frozen greedy policy. Training divergence is caught and reported in
// the result with the partial history kept.
RunResult execute(const ExperimentConfig& config);

// Output root: UAVMF_OUTPUT_ROOT when set and `dir` is relative.
std::filesystem::path resolve_output_dir(const std::string& dir);

// Writes metrics.csv, equilibrium.csv, checkpoint.bin, manifest.txt,
// eval_actions.csv and eval_summary.csv into `dir`.
void write_run(const RunResult& result, const std::filesystem::path& dir);

// execute + write_run; rethrows training divergence after writing the
// partial outputs.
RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir);

struct SweepPoint {
  ExperimentConfig config;
  std::string name;  // run directory name
};

// Cartesian product of the non-empty sweep axes (algorithms, q, sigma,
// eta, coverage, seeds).
std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config);
std::vector<std::filesystem::path> run_sweep(const ExperimentConfig& config,
                                             const std::filesystem::path& root);

struct RobustnessResult {
  std::vector<double> episode_reward;  // mean reward of the alive UAVs
  std::vector<int> episode_alive;
  std::vector<int> removed_cells;
  double before = 0.0;
  double after = 0.0;
  double relative_change = 0.0;
};

// Runs the frozen greedy policy in the full population, removing
// `removal_count` random non-representative UAVs at `removal_episode`.
RobustnessResult evaluate_robustness(const ExperimentConfig& config, const rl::Policy& policy,
                                     const mfg::MeanField& meanfield, int removal_count,
                                     int removal_episode);

RobustnessResult run_robustness(const ExperimentConfig& config, int removal_count,
                                int removal_episode,
                                const std::optional<std::filesystem::path>& dir = std::nullopt);

}  // namespace uavmf::harness
