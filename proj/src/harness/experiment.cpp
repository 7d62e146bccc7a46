#include "uavmf/harness/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

#include "uavmf/core/version.hpp"
#include "uavmf/harness/csv.hpp"
#include "uavmf/mfg/representative_env.hpp"
#include "uavmf/pomfg/po_solver.hpp"

namespace uavmf::harness {

namespace {

template <typename Env>
std::vector<EvalRecord> evaluate_env(Env& env, const rl::Policy& policy, int episodes, int slots,
                                     const env::EnergyParams& energy, std::uint64_t seed) {
  Rng rng = derive_stream(seed, 0x6576616cULL);
  std::vector<EvalRecord> out;
  std::vector<double> x;
  for (int ep = 0; ep < episodes; ++ep) {
    env.reset(rng);
    for (int t = 0; t < slots; ++t) {
      env.features(x);
      const int a = policy.greedy(x, env.feasible_mask());
      const int prev = env.state().prev_hover;
      const rl::StepInfo info = env.step(a, rng);
      const env::AgentAction& applied = env.last_action();
      EvalRecord r;
      r.episode = ep;
      r.slot = t;
      r.prev_hover = prev;
      r.hover = applied.hover;
      r.assoc = applied.assoc ? *applied.assoc : -1;
      r.power_idx = applied.power_idx;
      r.power_mw = energy.power_levels[applied.power_idx] * 1e3;
      r.reward = info.reward;
      r.ee = info.ee;
      r.interference_penalty = info.interference_penalty;
      out.push_back(r);
    }
  }
  return out;
}

std::string hex(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

EvalSummary summarize(const std::vector<EvalRecord>& records) {
  EvalSummary s;
  for (const EvalRecord& r : records) {
    s.mean_reward += r.reward;
    s.mean_ee += r.ee;
    s.mean_interference_penalty += r.interference_penalty;
    s.flying_probability += r.hover != r.prev_hover ? 1.0 : 0.0;
    s.mean_power_mw += r.power_mw;
  }
  s.slots = static_cast<int>(records.size());
  if (s.slots > 0) {
    const double n = s.slots;
    s.mean_reward /= n;
    s.mean_ee /= n;
    s.mean_interference_penalty /= n;
    s.flying_probability /= n;
    s.mean_power_mw /= n;
  }
  return s;
}

TrainingSummary summarize_training(const std::vector<rl::EpisodeStats>& episodes, int window) {
  TrainingSummary s;
  const std::size_t n = std::min<std::size_t>(episodes.size(), std::max(window, 0));
  for (std::size_t i = episodes.size() - n; i < episodes.size(); ++i) {
    const rl::EpisodeStats& e = episodes[i];
    s.mean_reward += e.mean_reward;
    s.mean_ee += e.mean_ee;
    s.mean_interference_penalty += e.mean_penalty;
    s.flying_probability += e.flying_probability;
    s.mean_power_mw += e.mean_power_w * 1e3;
  }
  s.episodes = static_cast<int>(n);
  if (n > 0) {
    const double d = static_cast<double>(n);
    s.mean_reward /= d;
    s.mean_ee /= d;
    s.mean_interference_penalty /= d;
    s.flying_probability /= d;
    s.mean_power_mw /= d;
  }
  return s;
}

RunResult execute(const ExperimentConfig& config) {
  validate(config);
  RunResult r;
  r.config = config;
  const mfg::LearnerSetup setup = baselines::learner_setup(config.algorithm, config.learners);
  const env::PhysicsConfig& phys = config.physics;

  if (config.partially_observable) {
    pomfg::PoSolverConfig pc{config.solver(), config.coverage, config.staleness_cap};
    pomfg::PoSolveResult res;
    try {
      pomfg::solve_pomfg(phys, setup.rule, pc, res);
    } catch (const rl::TrainingDiverged& e) {
      r.diverged = true;
      r.error = e.what();
    }
    r.episodes = std::move(res.episodes);
    r.episode_iteration = std::move(res.episode_iteration);
    r.report = std::move(res.report);
    r.trainer = std::move(res.trainer);
    r.meanfield = std::move(res.meanfield);
    r.obs_meanfield = std::move(res.obs_meanfield);
  } else {
    mfg::SolveResult res;
    try {
      mfg::solve_equilibrium(phys, setup, config.solver(), res);
    } catch (const rl::TrainingDiverged& e) {
      r.diverged = true;
      r.error = e.what();
    }
    r.episodes = std::move(res.episodes);
    r.episode_iteration = std::move(res.episode_iteration);
    r.report = std::move(res.report);
    r.trainer = std::move(res.trainer);
    r.meanfield = std::move(res.meanfield);
  }
  r.training_summary = summarize_training(r.episodes, config.metrics_window);
  if (r.diverged || !r.trainer) return r;

  r.policy = r.trainer->greedy_policy();
  if (config.partially_observable) {
    pomfg::PoEnv env(phys, config.coverage, config.staleness_cap, *r.obs_meanfield, *r.meanfield);
    r.eval = evaluate_env(env, r.policy, config.eval_episodes, config.eval_slots, phys.energy,
                          config.seed);
  } else {
    mfg::RepresentativeEnv env(phys, setup.features, *r.meanfield);
    r.eval = evaluate_env(env, r.policy, config.eval_episodes, config.eval_slots, phys.energy,
                          config.seed);
  }
  r.eval_summary = summarize(r.eval);
  return r;
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  if (p.is_absolute()) return p;
  if (const char* root = std::getenv("UAVMF_OUTPUT_ROOT"); root && *root)
    return std::filesystem::path(root) / p;
  return p;
}

void write_run(const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "metrics.csv", std::ios::binary);
    CsvWriter w(out, {"episode", "iteration", "mean_reward", "mean_ee",
                      "mean_interference_penalty", "flying_probability", "mean_power_mw",
                      "mean_loss", "active"});
    for (std::size_t i = 0; i < r.episodes.size(); ++i) {
      const rl::EpisodeStats& e = r.episodes[i];
      w << e.episode << r.episode_iteration[i] << e.mean_reward << e.mean_ee << e.mean_penalty
        << e.flying_probability << e.mean_power_w * 1e3 << e.mean_loss << 1;
      w.end_row();
    }
  }
  {
    std::ofstream out(dir / "equilibrium.csv", std::ios::binary);
    mfg::write_report_csv(r.report, out);
  }
  if (r.trainer) {
    std::ofstream out(dir / "checkpoint.bin", std::ios::binary);
    r.trainer->save(out);
  }
  {
    std::ofstream out(dir / "manifest.txt", std::ios::binary);
    out << "# uavmf run manifest\n";
    out << "# version: " << kVersion << "\n";
    out << "# config_hash: " << hex(config_hash(r.config)) << "\n";
    out << "# seed: " << r.config.seed << "\n";
    out << "# algorithm: " << baselines::to_string(r.config.algorithm) << "\n";
    out << "# status: " << (r.diverged ? "diverged: " + r.error : std::string("ok")) << "\n";
    out << to_text(r.config);
  }
  {
    std::ofstream out(dir / "eval_actions.csv", std::ios::binary);
    CsvWriter w(out, {"episode", "slot", "prev_hover", "hover", "assoc", "power_idx", "power_mw",
                      "flew", "reward", "ee", "interference_penalty"});
    for (const EvalRecord& e : r.eval) {
      w << e.episode << e.slot << e.prev_hover << e.hover << e.assoc << e.power_idx << e.power_mw
        << (e.hover != e.prev_hover ? 1 : 0) << e.reward << e.ee << e.interference_penalty;
      w.end_row();
    }
  }
  {
    std::ofstream out(dir / "eval_summary.csv", std::ios::binary);
    CsvWriter w(out, {"metric", "value"});
    const auto row = [&](const std::string& k, double v) {
      w << k << v;
      w.end_row();
    };
    row("mean_reward", r.eval_summary.mean_reward);
    row("mean_ee", r.eval_summary.mean_ee);
    row("mean_interference_penalty", r.eval_summary.mean_interference_penalty);
    row("flying_probability", r.eval_summary.flying_probability);
    row("mean_power_mw", r.eval_summary.mean_power_mw);
    row("slots", r.eval_summary.slots);
    row("train_mean_reward", r.training_summary.mean_reward);
    row("train_mean_ee", r.training_summary.mean_ee);
    row("train_mean_interference_penalty", r.training_summary.mean_interference_penalty);
    row("train_flying_probability", r.training_summary.flying_probability);
    row("train_mean_power_mw", r.training_summary.mean_power_mw);
    row("train_episodes", r.training_summary.episodes);
    row("iterations", r.report.iterations);
    row("converged", r.report.converged ? 1 : 0);
    row("final_distance", r.report.distances.empty() ? 1.0 : r.report.distances.back());
    row("final_distance_if", r.report.distances_if.empty() ? 1.0 : r.report.distances_if.back());
  }
}

RunResult run_experiment(const ExperimentConfig& config, const std::filesystem::path& dir) {
  RunResult r = execute(config);
  write_run(r, dir);
  if (r.diverged) throw rl::TrainingDiverged(r.error);
  return r;
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& config) {
  struct Axis {
    std::string key;
    std::string label;
    std::vector<std::string> values;
  };
  std::vector<Axis> axes;
  const auto numbers = [](const std::vector<double>& v) {
    std::vector<std::string> out;
    for (double d : v) out.push_back(format_number(d));
    return out;
  };
  if (!config.sweep_algorithms.empty())
    axes.push_back({"algorithm", "alg", config.sweep_algorithms});
  if (!config.sweep_q.empty()) axes.push_back({"demand_q", "q", numbers(config.sweep_q)});
  if (!config.sweep_sigma.empty())
    axes.push_back({"sigma_per_w_s", "sigma", numbers(config.sweep_sigma)});
  if (!config.sweep_eta_db.empty())
    axes.push_back({"eta_db", "eta", numbers(config.sweep_eta_db)});
  if (!config.sweep_coverage.empty())
    axes.push_back({"coverage_fraction", "cov", numbers(config.sweep_coverage)});
  if (!config.sweep_seeds.empty()) {
    std::vector<std::string> seeds;
    for (auto s : config.sweep_seeds) seeds.push_back(std::to_string(s));
    axes.push_back({"seed", "seed", seeds});
  }

  std::vector<SweepPoint> points{{config, ""}};
  for (const Axis& axis : axes) {
    std::vector<SweepPoint> next;
    for (const SweepPoint& p : points) {
      for (const std::string& v : axis.values) {
        SweepPoint q = p;
        apply_override(q.config, axis.key + "=" + v);
        if (axis.key == "coverage_fraction") q.config.partially_observable = true;
        q.name += (q.name.empty() ? "" : "_") + axis.label + "=" + v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  for (SweepPoint& p : points) {
    p.config.sweep_q.clear();
    p.config.sweep_sigma.clear();
    p.config.sweep_eta_db.clear();
    p.config.sweep_coverage.clear();
    p.config.sweep_seeds.clear();
    p.config.sweep_algorithms.clear();
    if (p.name.empty()) p.name = "run";
    validate(p.config);
  }
  return points;
}

std::vector<std::filesystem::path> run_sweep(const ExperimentConfig& config,
                                             const std::filesystem::path& root) {
  std::vector<std::filesystem::path> dirs;
  for (const SweepPoint& p : expand_sweep(config)) {
    const std::filesystem::path dir = root / p.name;
    run_experiment(p.config, dir);
    dirs.push_back(dir);
  }
  return dirs;
}

RobustnessResult evaluate_robustness(const ExperimentConfig& config, const rl::Policy& policy,
                                     const mfg::MeanField& meanfield, int removal_count,
                                     int removal_episode) {
  const int cells = config.physics.geometry.num_cells();
  const int rep = config.physics.geometry.centre_cell();
  if (removal_count < 0 || removal_count >= cells)
    throw std::invalid_argument("removal_count must be smaller than the population");
  const mfg::LearnerSetup setup = baselines::learner_setup(config.algorithm, config.learners);
  rl::Policy greedy{policy.net, rl::PolicyKind::kGreedy, 0.0};
  mfg::PopulationSimulator sim(config.physics, greedy, setup.features, meanfield);
  Rng rng = derive_stream(config.seed, 0x726f6275ULL);
  Rng removal_rng = derive_stream(config.seed, 0x72656d76ULL);
  sim.reset(rng);

  RobustnessResult out;
  double before = 0.0, after = 0.0;
  int n_before = 0, n_after = 0;
  for (int ep = 0; ep < config.robustness_episodes; ++ep) {
    if (ep == removal_episode && removal_count > 0) {
      std::vector<int> candidates;
      for (int k = 0; k < cells; ++k)
        if (k != rep && sim.world().alive[k]) candidates.push_back(k);
      std::shuffle(candidates.begin(), candidates.end(), removal_rng);
      candidates.resize(std::min<std::size_t>(candidates.size(), removal_count));
      std::sort(candidates.begin(), candidates.end());
      for (int k : candidates) sim.world().alive[k] = 0;
      out.removed_cells = candidates;
    }
    double total = 0.0;
    for (int t = 0; t < config.eval_slots; ++t) {
      const env::WorldStep& step = sim.step(rng);
      double slot_sum = 0.0;
      int alive = 0;
      for (int k = 0; k < cells; ++k) {
        if (!sim.world().alive[k]) continue;
        slot_sum += step.outcomes[k].reward;
        ++alive;
      }
      total += slot_sum / alive;
    }
    const double mean = total / config.eval_slots;
    out.episode_reward.push_back(mean);
    out.episode_alive.push_back(sim.world().num_alive());
    if (ep < removal_episode) {
      before += mean;
      ++n_before;
    } else {
      after += mean;
      ++n_after;
    }
  }
  out.before = n_before ? before / n_before : 0.0;
  out.after = n_after ? after / n_after : 0.0;
  out.relative_change =
      out.before != 0.0 ? std::abs(out.after - out.before) / std::abs(out.before) : 0.0;
  return out;
}

RobustnessResult run_robustness(const ExperimentConfig& config, int removal_count,
                                int removal_episode,
                                const std::optional<std::filesystem::path>& dir) {
  if (config.partially_observable)
    throw std::invalid_argument("robustness runs use the fully observable game");
  RunResult r = execute(config);
  if (dir) write_run(r, *dir);
  if (r.diverged) throw rl::TrainingDiverged(r.error);
  RobustnessResult out =
      evaluate_robustness(config, r.policy, *r.meanfield, removal_count, removal_episode);
  if (dir) {
    std::ofstream f(*dir / "robustness.csv", std::ios::binary);
    CsvWriter w(f, {"episode", "active_uavs", "mean_reward"});
    for (std::size_t e = 0; e < out.episode_reward.size(); ++e) {
      w << static_cast<int>(e) << out.episode_alive[e] << out.episode_reward[e];
      w.end_row();
    }
  }
  return out;
}

}  // namespace uavmf::harness
