#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "uavmf/harness/config.hpp"
#include "uavmf/harness/csv.hpp"
#include "uavmf/harness/experiment.hpp"
#include "uavmf/harness/plotdata.hpp"

using namespace uavmf;
using namespace uavmf::harness;
namespace fs = std::filesystem;

namespace {

const char* kTiny =
    "grid_rows = 3\n"
    "grid_cols = 3\n"
    "steps_per_episode = 10\n"
    "outer_iterations = 2\n"
    "episodes_per_iteration = 3\n"
    "minibatch = 8\n"
    "hidden_layers = 8\n"
    "propagation_slots = 10\n"
    "propagation_average_slots = 5\n"
    "eval_episodes = 2\n"
    "eval_slots = 10\n"
    "metrics_window = 4\n"
    "robustness_episodes = 6\n"
    "removal_episode = 3\n";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("uavmf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("an empty config yields the defaults") {
  const ExperimentConfig c = parse_config("");
  CHECK(c.physics.demand.q == 0.7);
  CHECK(c.physics.reward.sigma == 240.0);
  CHECK(c.eta_db == 0.0);
  CHECK(c.physics.link.eta == 1.0);
  CHECK(c.physics.link.tau == 60.0);
  CHECK(c.physics.link.tau1 == 25.0);
  CHECK(c.physics.link.tau2 == 35.0);
  CHECK(c.physics.link.bandwidth == 1e6);
  CHECK(c.physics.geometry.altitude == 100.0);
  CHECK(c.power_levels_mw == std::vector<double>{0, 50, 100, 150, 200});
  CHECK(c.physics.energy.power_levels[4] == doctest::Approx(0.2));
  CHECK(c.n0_dbm == -110.0);
  CHECK(c.physics.link.noise == doctest::Approx(1e-14));
  CHECK(c.physics.geometry.grid_rows == 19);
  CHECK(c.physics.geometry.grid_cols == 19);
  CHECK(c.algorithm == baselines::Algorithm::kMeMfdqn);
}

TEST_CASE("config validation and overrides") {
  CHECK_THROWS_AS(parse_config("demand_q = 1.5\n"), UnitError);
  CHECK_THROWS_AS(parse_config("grid_rows = 0\n"), UnitError);
  CHECK_THROWS_AS(parse_config("no_such_key = 1\n"), SchemaError);
  CHECK_THROWS_AS(parse_config("seed = 1\nseed = 2\n"), SchemaError);
  CHECK_THROWS_AS(parse_config("seed 1\n"), ParseError);
  CHECK_THROWS_AS(parse_config("algorithm = DQN\n"), ConfigError);

  const ExperimentConfig c = parse_config("grid_rows = 7\ngrid_cols = 7  # desk\n");
  CHECK(c.physics.geometry.num_cells() == 49);

  const ExperimentConfig s = parse_config("full_scale = true\ngrid_rows = 5\n");
  CHECK(s.physics.geometry.grid_rows == 5);
  CHECK(s.physics.geometry.grid_cols == 19);

  ExperimentConfig o = c;
  apply_override(o, "eta_db=3");
  CHECK(o.physics.link.eta == doctest::Approx(std::pow(10.0, 0.3)));
  apply_override(o, "algorithm = EG-IDQN");
  CHECK(o.algorithm == baselines::Algorithm::kEgIdqn);
  CHECK_THROWS_AS(apply_override(o, "eta_db"), ParseError);
}

TEST_CASE("canonical text round-trips") {
  ExperimentConfig c = parse_config(kTiny);
  apply_override(c, "demand_q=0.55");
  apply_override(c, "sigma_per_w_s=1200");
  apply_override(c, "power_levels_mw=0,20,40");
  apply_override(c, "sweep_seeds=1,2,3");
  const std::string text = to_text(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(to_text(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.physics.energy.power_levels == c.physics.energy.power_levels);
  apply_override(c, "seed=9");
  CHECK(config_hash(back) != config_hash(c));
}

TEST_CASE("a run writes its outputs and reruns identically") {
  const fs::path root = scratch("run");
  const ExperimentConfig c = parse_config(kTiny);
  const RunResult r = run_experiment(c, root / "a");
  run_experiment(c, root / "b");
  for (const char* f : {"metrics.csv", "equilibrium.csv", "checkpoint.bin", "manifest.txt",
                        "eval_actions.csv", "eval_summary.csv"}) {
    CAPTURE(f);
    REQUIRE(fs::exists(root / "a" / f));
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
  CHECK(!r.diverged);
  CHECK(r.episodes.size() == 6u);

  const ExperimentConfig manifest = load_config(root / "a" / "manifest.txt");
  CHECK(to_text(manifest) == to_text(c));

  const CsvTable metrics = read_csv(root / "a" / "metrics.csv");
  CHECK(metrics.rows.size() == 6u);
  CHECK(metrics.header.front() == "episode");

  SUBCASE("summary statistics are recomputable from the action log") {
    const CsvTable actions = read_csv(root / "a" / "eval_actions.csv");
    REQUIRE(actions.rows.size() == 20u);
    double fly = 0.0, power = 0.0;
    for (std::size_t i = 0; i < actions.rows.size(); ++i) {
      fly += actions.number(i, "hover") != actions.number(i, "prev_hover");
      power += actions.number(i, "power_mw");
      CHECK(actions.number(i, "flew") == (actions.number(i, "hover") != actions.number(i, "prev_hover")));
      CHECK(actions.number(i, "power_mw") ==
            c.power_levels_mw[static_cast<int>(actions.number(i, "power_idx"))]);
    }
    const RunData data = load_run(root / "a");
    CHECK(data.summary.at("flying_probability") == doctest::Approx(fly / 20));
    CHECK(data.summary.at("mean_power_mw") == doctest::Approx(power / 20));
    CHECK(data.summary.at("slots") == 20);
  }
  fs::remove_all(root);
}

TEST_CASE("the output root variable redirects relative directories") {
  const char* old = std::getenv("UAVMF_OUTPUT_ROOT");
  const std::string saved = old ? old : "";
  setenv("UAVMF_OUTPUT_ROOT", "/tmp/uavmf_root", 1);
  CHECK(resolve_output_dir("x") == fs::path("/tmp/uavmf_root/x"));
  CHECK(resolve_output_dir("/abs/y") == fs::path("/abs/y"));
  if (old) setenv("UAVMF_OUTPUT_ROOT", saved.c_str(), 1);
  else unsetenv("UAVMF_OUTPUT_ROOT");
}

TEST_CASE("sweeps expand the cartesian product") {
  ExperimentConfig c = parse_config(kTiny);
  apply_override(c, "sweep_q=0.5,0.7,0.9");
  apply_override(c, "sweep_seeds=1,2");
  const auto points = expand_sweep(c);
  REQUIRE(points.size() == 6u);
  std::set<std::string> names;
  for (const auto& p : points) {
    names.insert(p.name);
    CHECK(p.config.sweep_q.empty());
    CHECK(p.config.sweep_seeds.empty());
  }
  CHECK(names.size() == 6u);
  CHECK(expand_sweep(parse_config(kTiny)).size() == 1u);

  ExperimentConfig cov = parse_config(kTiny);
  apply_override(cov, "sweep_coverage_fraction=0.5");
  const auto pc = expand_sweep(cov);
  REQUIRE(pc.size() == 1u);
  CHECK(pc[0].config.partially_observable);
  CHECK(pc[0].config.coverage == 0.5);

  const fs::path root = scratch("sweep");
  ExperimentConfig q = parse_config(kTiny);
  apply_override(q, "sweep_q=0.5,0.9");
  const auto dirs = run_sweep(q, root);
  REQUIRE(dirs.size() == 2u);
  std::vector<double> qs;
  for (const auto& d : dirs) {
    CHECK(fs::exists(d / "eval_summary.csv"));
    qs.push_back(load_config(d / "manifest.txt").physics.demand.q);
  }
  CHECK(qs == std::vector<double>{0.5, 0.9});

  SUBCASE("plot data") {
    const fs::path out = root / "fig6.csv";
    emit_plot_data(dirs, PlotKind::kFig6, out);
    const CsvTable t = read_csv(out);
    CHECK(t.header == std::vector<std::string>{"q", "flying_probability", "mean_power_mW"});
    CHECK(t.rows.size() == 2u);
    CHECK(t.number(0, "q") == 0.5);

    const fs::path none = root / "none.csv";
    CHECK_THROWS_AS(emit_plot_data({}, PlotKind::kFig6, none), PlotDataError);
    CHECK(!fs::exists(none));
    // q is not an axis of the sigma figures
    CHECK_THROWS_AS(emit_plot_data(dirs, PlotKind::kFig8, none), PlotDataError);
    CHECK(!fs::exists(none));

    for (PlotKind k : all_plot_kinds()) CHECK(parse_plot_kind(to_string(k)) == k);
    CHECK_THROWS_AS(parse_plot_kind("fig3"), PlotDataError);
  }
  fs::remove_all(root);
}

TEST_CASE("learning curves follow the legend order") {
  const fs::path root = scratch("legend");
  ExperimentConfig c = parse_config(kTiny);
  apply_override(c, "sweep_algorithms=EG-IDQN,ME-MFDQN");
  const auto dirs = run_sweep(c, root);
  const fs::path out = root / "fig4.csv";
  emit_plot_data(dirs, PlotKind::kFig4, out);
  const CsvTable t = read_csv(out);
  CHECK(t.header == std::vector<std::string>{"algorithm", "episode", "mean_reward"});
  REQUIRE(t.rows.size() == 12u);
  CHECK(t.rows.front()[0] == "ME-MFDQN");
  CHECK(t.rows.back()[0] == "EG-IDQN");
  fs::remove_all(root);
}

TEST_CASE("robustness") {
  const ExperimentConfig c = parse_config(kTiny);
  const RunResult r = execute(c);
  REQUIRE(r.meanfield.has_value());

  const RobustnessResult same = evaluate_robustness(c, r.policy, *r.meanfield, 0, 3);
  CHECK(same.removed_cells.empty());
  CHECK(same.episode_reward.size() == 6u);
  for (int a : same.episode_alive) CHECK(a == 9);

  const RobustnessResult gone = evaluate_robustness(c, r.policy, *r.meanfield, 8, 3);
  CHECK(gone.removed_cells.size() == 8u);
  for (int cell : gone.removed_cells) CHECK(cell != c.physics.geometry.centre_cell());
  CHECK(gone.episode_alive[2] == 9);
  CHECK(gone.episode_alive[3] == 1);
  CHECK(std::isfinite(gone.after));
  CHECK(std::isfinite(gone.relative_change));

  // identical rollouts up to the removal
  for (int e = 0; e < 3; ++e) CHECK(same.episode_reward[e] == gone.episode_reward[e]);

  CHECK_THROWS(evaluate_robustness(c, r.policy, *r.meanfield, 9, 3));

  const fs::path root = scratch("robust");
  run_robustness(c, 2, 3, root);
  const CsvTable t = read_csv(root / "robustness.csv");
  CHECK(t.header == std::vector<std::string>{"episode", "active_uavs", "mean_reward"});
  CHECK(t.rows.size() == 6u);
  CHECK(t.number(5, "active_uavs") == 7);
  fs::remove_all(root);
}

}  // TEST_SUITE
