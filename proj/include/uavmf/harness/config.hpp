#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "uavmf/baselines/baselines.hpp"
#include "uavmf/env/physics.hpp"
#include "uavmf/mfg/equilibrium.hpp"

namespace uavmf::harness {

inline constexpr int kSchemaVersion = 1;

// Named configuration failures. The CLI reports what() prefixed by name().
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
  virtual const char* name() const = 0;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
  const char* name() const override { return "ParseError"; }
};
struct SchemaError : ConfigError {
  using ConfigError::ConfigError;
  const char* name() const override { return "SchemaError"; }
};
struct UnitError : ConfigError {
  using ConfigError::ConfigError;
  const char* name() const override { return "UnitError"; }
};

struct ExperimentConfig {
  env::PhysicsConfig physics;
  // Values as written in the file; the physics fields above are derived
  // from them so that the canonical text round-trips exactly.
  double eta_db = 0.0;
  double n0_dbm = -110.0;
  std::vector<double> power_levels_mw = {0.0, 50.0, 100.0, 150.0, 200.0};

  rl::TrainerConfig trainer;
  baselines::Algorithm algorithm = baselines::Algorithm::kMeMfdqn;
  baselines::BaselineConfig learners;
  int outer_iterations = 10;
  int episodes_per_iteration = 30;
  double tolerance = 1e-2;
  mfg::PropagationConfig propagation;
  bool flush_buffer = true;
  bool reinitialize = false;

  bool partially_observable = false;
  double coverage = 1.0;
  int staleness_cap = 16;

  std::uint64_t seed = 1;
  int eval_episodes = 5;
  int eval_slots = 100;
  int metrics_window = 50;

  int removal_count = 2;
  int removal_episode = 10;
  int robustness_episodes = 20;

  std::vector<double> sweep_q;
  std::vector<double> sweep_sigma;
  std::vector<double> sweep_eta_db;
  std::vector<double> sweep_coverage;
  std::vector<std::uint64_t> sweep_seeds;
  std::vector<std::string> sweep_algorithms;

  std::string output_dir = "runs";
  bool full_scale = false;

  int total_episodes() const { return outer_iterations * episodes_per_iteration; }
  mfg::SolverConfig solver() const;
};

// Defaults with the full-scale switch applied.
ExperimentConfig default_config();

// Parses `key = value` lines; '#' starts a comment. Absent keys keep their
// defaults, unknown keys are rejected.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
// Applies one `key=value` override to an already loaded config.
void apply_override(ExperimentConfig& config, const std::string& assignment);

void validate(const ExperimentConfig& config);

// Canonical text: every key in a fixed order. parse_config(to_text(c))
// reproduces c.
std::string to_text(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

std::vector<std::string> config_keys();

}  // namespace uavmf::harness
