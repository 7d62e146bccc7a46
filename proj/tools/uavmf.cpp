// Command-line front end: run, sweep, robustness, plotdata, validate-config.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "uavmf/core/version.hpp"
#include "uavmf/harness/config.hpp"
#include "uavmf/harness/experiment.hpp"
#include "uavmf/harness/plotdata.hpp"
#include "uavmf/rl/checkpoint.hpp"

namespace {

using namespace uavmf;
using namespace uavmf::harness;

struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args, bool required) {
  auto* opt = cmd->add_option("-c,--config", args.path, "Experiment config file");
  if (required) opt->required();
  cmd->add_option("--set", args.sets, "Override one key: key=value (repeatable)");
  cmd->allow_extras();
}

// Extra `--key=value` or `--key value` flags mirror config keys.
std::vector<std::string> extra_assignments(const std::vector<std::string>& extras) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const std::string& a = extras[i];
    if (a.rfind("--", 0) != 0) throw SchemaError("unexpected argument '" + a + "'");
    const std::string body = a.substr(2);
    if (const auto eq = body.find('='); eq != std::string::npos) {
      out.push_back(body);
    } else if (i + 1 < extras.size()) {
      out.push_back(body + "=" + extras[++i]);
    } else {
      throw SchemaError("flag '" + a + "' needs a value");
    }
  }
  return out;
}

ExperimentConfig build_config(const ConfigArgs& args, const CLI::App* cmd) {
  ExperimentConfig c = args.path.empty() ? default_config() : load_config(args.path);
  for (const std::string& s : args.sets) apply_override(c, s);
  for (const std::string& s : extra_assignments(cmd->remaining())) apply_override(c, s);
  validate(c);
  return c;
}

int fail(const char* name, const std::string& what, int code) {
  std::cerr << name << ": " << what << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field UAV downlink experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  ConfigArgs run_args, sweep_args, robust_args, check_args;
  std::string run_out, sweep_out, robust_out;
  int removal_count = -1, removal_episode = -1;
  bool print_config = false;
  std::string plot_kind, plot_out;
  std::vector<std::string> plot_runs;

  auto* run = app.add_subcommand("run", "Solve one configuration and write its run directory");
  add_config_options(run, run_args, false);
  run->add_option("-o,--out", run_out, "Run directory (default: output_dir)");

  auto* sweep = app.add_subcommand("sweep", "Run every point of the configured sweep axes");
  add_config_options(sweep, sweep_args, false);
  sweep->add_option("-o,--out", sweep_out, "Sweep root (default: output_dir)");

  auto* robust = app.add_subcommand("robustness", "Train, then remove UAVs and keep evaluating");
  add_config_options(robust, robust_args, false);
  robust->add_option("-o,--out", robust_out, "Run directory (default: output_dir)");
  robust->add_option("--removal-count", removal_count, "UAVs to remove (default: config)");
  robust->add_option("--removal-episode", removal_episode, "Episode of removal (default: config)");

  auto* plot = app.add_subcommand("plotdata", "Emit the tidy table of one figure kind");
  plot->add_option("-k,--kind", plot_kind, "fig4 .. fig12")->required();
  plot->add_option("-o,--out", plot_out, "Output CSV")->required();
  plot->add_option("runs", plot_runs, "Run directories");

  auto* check = app.add_subcommand("validate-config", "Load, validate and optionally print a config");
  add_config_options(check, check_args, true);
  check->add_flag("--print", print_config, "Print the canonical config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentConfig c = build_config(run_args, run);
      const auto dir = resolve_output_dir(run_out.empty() ? c.output_dir : run_out);
      const RunResult r = run_experiment(c, dir);
      std::printf("%s: eval mean reward %.6g, EE %.6g, flying %.4g, power %.4g mW\n",
                  dir.string().c_str(), r.eval_summary.mean_reward, r.eval_summary.mean_ee,
                  r.eval_summary.flying_probability, r.eval_summary.mean_power_mw);
    } else if (sweep->parsed()) {
      const ExperimentConfig c = build_config(sweep_args, sweep);
      const auto root = resolve_output_dir(sweep_out.empty() ? c.output_dir : sweep_out);
      for (const auto& d : run_sweep(c, root)) std::printf("%s\n", d.string().c_str());
    } else if (robust->parsed()) {
      const ExperimentConfig c = build_config(robust_args, robust);
      const auto dir = resolve_output_dir(robust_out.empty() ? c.output_dir : robust_out);
      const RobustnessResult r =
          run_robustness(c, removal_count >= 0 ? removal_count : c.removal_count,
                         removal_episode >= 0 ? removal_episode : c.removal_episode, dir);
      std::printf("before %.6g after %.6g relative change %.4g\n", r.before, r.after,
                  r.relative_change);
    } else if (plot->parsed()) {
      std::vector<std::filesystem::path> dirs(plot_runs.begin(), plot_runs.end());
      emit_plot_data(dirs, parse_plot_kind(plot_kind), resolve_output_dir(plot_out));
    } else if (check->parsed()) {
      const ExperimentConfig c = build_config(check_args, check);
      if (print_config) std::cout << to_text(c);
      std::printf("ok\n");
    }
  } catch (const ConfigError& e) {
    return fail(e.name(), e.what(), 2);
  } catch (const rl::TrainingDiverged& e) {
    return fail("TrainingDiverged", e.what(), 3);
  } catch (const PlotDataError& e) {
    return fail(e.name(), e.what(), 4);
  } catch (const rl::CheckpointError& e) {
    return fail("CheckpointError", e.what(), 5);
  } catch (const std::exception& e) {
    return fail("Error", e.what(), 1);
  }
  return 0;
}
