#include "uavmf/harness/config.hpp"

#include "uavmf/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace uavmf::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) { return format_number(v); }

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ParseError(key + ": expected a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ParseError(key + ": expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty())
    throw ParseError(key + ": expected an unsigned integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(key + ": expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

std::string join_doubles(const std::vector<double>& v) {
  return join<double>(v, [](const double& d) { return fmt(d); });
}

struct Field {
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define DOUBLE_FIELD(name, expr)                                                     \
  Field {                                                                           \
    name, [](const ExperimentConfig& c) { return fmt(c.expr); },                    \
        [](ExperimentConfig& c, const std::string& v) { c.expr = to_double(name, v); } \
  }
#define INT_FIELD(name, expr)                                                         \
  Field {                                                                            \
    name, [](const ExperimentConfig& c) { return std::to_string(c.expr); },          \
        [](ExperimentConfig& c, const std::string& v) {                              \
          c.expr = static_cast<decltype(c.expr)>(to_int(name, v));                   \
        }                                                                            \
  }
#define BOOL_FIELD(name, expr)                                                          \
  Field {                                                                              \
    name, [](const ExperimentConfig& c) { return std::string(c.expr ? "true" : "false"); }, \
        [](ExperimentConfig& c, const std::string& v) { c.expr = to_bool(name, v); }    \
  }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = {
      {"schema_version", [](const ExperimentConfig&) { return std::to_string(kSchemaVersion); },
       [](ExperimentConfig&, const std::string& v) {
         if (to_int("schema_version", v) != kSchemaVersion)
           throw SchemaError("schema_version: unsupported version " + v);
       }},
      BOOL_FIELD("full_scale", full_scale),
      {"algorithm", [](const ExperimentConfig& c) { return baselines::to_string(c.algorithm); },
       [](ExperimentConfig& c, const std::string& v) {
         try {
           c.algorithm = baselines::parse_algorithm(v);
         } catch (const std::invalid_argument& e) {
           throw SchemaError(std::string("algorithm: ") + e.what());
         }
       }},
      {"seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
       [](ExperimentConfig& c, const std::string& v) { c.seed = to_u64("seed", v); }},
      // geometry
      INT_FIELD("grid_rows", physics.geometry.grid_rows),
      INT_FIELD("grid_cols", physics.geometry.grid_cols),
      DOUBLE_FIELD("cell_side_m", physics.geometry.cell_side),
      {"altitude_m", [](const ExperimentConfig& c) { return fmt(c.physics.geometry.altitude); },
       [](ExperimentConfig& c, const std::string& v) {
         c.physics.geometry.altitude = to_double("altitude_m", v);
         if (c.physics.geometry.altitude > 0.0) {
           const auto fitted = env::ChannelParams::for_altitude(c.physics.geometry.altitude);
           c.physics.channel.alpha_los = fitted.alpha_los;
           c.physics.channel.alpha_nlos = fitted.alpha_nlos;
         }
       }},
      // demand
      DOUBLE_FIELD("demand_p", physics.demand.p),
      DOUBLE_FIELD("demand_q", physics.demand.q),
      // channel
      DOUBLE_FIELD("los_c1", physics.channel.c1),
      DOUBLE_FIELD("los_c2_per_deg", physics.channel.c2),
      DOUBLE_FIELD("pathloss_los_linear", physics.channel.a_los),
      DOUBLE_FIELD("pathloss_nlos_linear", physics.channel.a_nlos),
      DOUBLE_FIELD("pathloss_exp_los", physics.channel.alpha_los),
      DOUBLE_FIELD("pathloss_exp_nlos", physics.channel.alpha_nlos),
      DOUBLE_FIELD("nakagami_m", physics.channel.nakagami_m),
      DOUBLE_FIELD("fading_omega", physics.channel.omega),
      // link
      {"eta_db", [](const ExperimentConfig& c) { return fmt(c.eta_db); },
       [](ExperimentConfig& c, const std::string& v) {
         c.eta_db = to_double("eta_db", v);
         c.physics.link.eta = env::db_to_linear(c.eta_db);
       }},
      DOUBLE_FIELD("bandwidth_hz", physics.link.bandwidth),
      DOUBLE_FIELD("tau_s", physics.link.tau),
      DOUBLE_FIELD("tau1_s", physics.link.tau1),
      DOUBLE_FIELD("tau2_s", physics.link.tau2),
      {"n0_dbm", [](const ExperimentConfig& c) { return fmt(c.n0_dbm); },
       [](ExperimentConfig& c, const std::string& v) {
         c.n0_dbm = to_double("n0_dbm", v);
         c.physics.link.noise = env::dbm_to_watts(c.n0_dbm);
       }},
      // energy
      {"power_levels_mw",
       [](const ExperimentConfig& c) { return join_doubles(c.power_levels_mw); },
       [](ExperimentConfig& c, const std::string& v) {
         c.power_levels_mw = to_doubles("power_levels_mw", v);
         c.physics.energy.power_levels.clear();
         for (double mw : c.power_levels_mw) c.physics.energy.power_levels.push_back(mw * 1e-3);
       }},
      DOUBLE_FIELD("circuit_power_w", physics.energy.circuit_power),
      DOUBLE_FIELD("harvest_efficiency", physics.energy.harvest_efficiency),
      DOUBLE_FIELD("panel_area_m2", physics.energy.panel_area),
      DOUBLE_FIELD("irradiance_w_per_m2", physics.energy.irradiance),
      DOUBLE_FIELD("cloud_absorption_per_m", physics.energy.cloud_absorption),
      {"cloud_levels_m",
       [](const ExperimentConfig& c) { return join_doubles(c.physics.energy.cloud_levels); },
       [](ExperimentConfig& c, const std::string& v) {
         c.physics.energy.cloud_levels = to_doubles("cloud_levels_m", v);
       }},
      DOUBLE_FIELD("battery_max_j", physics.energy.battery_max),
      DOUBLE_FIELD("battery_alarm_j", physics.energy.battery_alarm),
      INT_FIELD("energy_levels", physics.energy.energy_levels),
      DOUBLE_FIELD("max_speed_mps", physics.energy.max_speed),
      DOUBLE_FIELD("uav_weight_n", physics.energy.propulsion.weight),
      DOUBLE_FIELD("air_density_kg_per_m3", physics.energy.propulsion.air_density),
      DOUBLE_FIELD("rotor_radius_m", physics.energy.propulsion.rotor_radius),
      DOUBLE_FIELD("rotor_area_m2", physics.energy.propulsion.rotor_area),
      DOUBLE_FIELD("rotor_solidity", physics.energy.propulsion.rotor_solidity),
      DOUBLE_FIELD("blade_angular_velocity_rad_per_s", physics.energy.propulsion.blade_angular_velocity),
      DOUBLE_FIELD("fuselage_drag_ratio", physics.energy.propulsion.fuselage_drag_ratio),
      DOUBLE_FIELD("profile_drag_coeff", physics.energy.propulsion.profile_drag_coeff),
      DOUBLE_FIELD("induced_correction", physics.energy.propulsion.induced_correction),
      // reward
      DOUBLE_FIELD("sigma_per_w_s", physics.reward.sigma),
      DOUBLE_FIELD("xi_per_j", physics.reward.xi),
      // trainer
      DOUBLE_FIELD("gamma", trainer.gamma),
      DOUBLE_FIELD("learning_rate", trainer.learning_rate),
      INT_FIELD("minibatch", trainer.minibatch),
      INT_FIELD("replay_capacity", trainer.replay_capacity),
      INT_FIELD("target_period", trainer.target_period),
      INT_FIELD("steps_per_episode", trainer.steps_per_episode),
      DOUBLE_FIELD("reward_scale", trainer.reward_scale),
      {"hidden_layers",
       [](const ExperimentConfig& c) {
         return join<int>(c.trainer.hidden, [](const int& h) { return std::to_string(h); });
       },
       [](ExperimentConfig& c, const std::string& v) {
         c.trainer.hidden.clear();
         for (const auto& s : split_list(v))
           c.trainer.hidden.push_back(static_cast<int>(to_int("hidden_layers", s)));
       }},
      INT_FIELD("learning_starts", trainer.learning_starts),
      DOUBLE_FIELD("divergence_factor", trainer.divergence_factor),
      INT_FIELD("divergence_warmup", trainer.divergence_warmup),
      // learners
      DOUBLE_FIELD("entropy_start", learners.entropy.start),
      DOUBLE_FIELD("entropy_end", learners.entropy.end),
      DOUBLE_FIELD("entropy_anneal_fraction", learners.entropy.fraction),
      DOUBLE_FIELD("epsilon_start", learners.epsilon.start),
      DOUBLE_FIELD("epsilon_end", learners.epsilon.end),
      DOUBLE_FIELD("epsilon_decay_fraction", learners.epsilon.fraction),
      DOUBLE_FIELD("temperature_start", learners.temperature.start),
      DOUBLE_FIELD("temperature_end", learners.temperature.end),
      DOUBLE_FIELD("temperature_decay_fraction", learners.temperature.fraction),
      {"meanfield_features",
       [](const ExperimentConfig& c) { return rl::to_string(c.learners.meanfield_features); },
       [](ExperimentConfig& c, const std::string& v) {
         try {
           c.learners.meanfield_features = rl::parse_feature_mode(v);
         } catch (const std::invalid_argument& e) {
           throw SchemaError(std::string("meanfield_features: ") + e.what());
         }
       }},
      // fixed point
      INT_FIELD("outer_iterations", outer_iterations),
      INT_FIELD("episodes_per_iteration", episodes_per_iteration),
      DOUBLE_FIELD("tolerance_tv", tolerance),
      INT_FIELD("propagation_slots", propagation.slots),
      INT_FIELD("propagation_average_slots", propagation.average_last),
      BOOL_FIELD("flush_buffer", flush_buffer),
      BOOL_FIELD("reinitialize", reinitialize),
      // partial observability
      BOOL_FIELD("partially_observable", partially_observable),
      DOUBLE_FIELD("coverage_fraction", coverage),
      INT_FIELD("staleness_cap", staleness_cap),
      // evaluation
      INT_FIELD("eval_episodes", eval_episodes),
      INT_FIELD("eval_slots", eval_slots),
      INT_FIELD("metrics_window", metrics_window),
      INT_FIELD("removal_count", removal_count),
      INT_FIELD("removal_episode", removal_episode),
      INT_FIELD("robustness_episodes", robustness_episodes),
      // sweeps
      {"sweep_q", [](const ExperimentConfig& c) { return join_doubles(c.sweep_q); },
       [](ExperimentConfig& c, const std::string& v) { c.sweep_q = to_doubles("sweep_q", v); }},
      {"sweep_sigma_per_w_s", [](const ExperimentConfig& c) { return join_doubles(c.sweep_sigma); },
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_sigma = to_doubles("sweep_sigma_per_w_s", v);
       }},
      {"sweep_eta_db", [](const ExperimentConfig& c) { return join_doubles(c.sweep_eta_db); },
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_eta_db = to_doubles("sweep_eta_db", v);
       }},
      {"sweep_coverage_fraction",
       [](const ExperimentConfig& c) { return join_doubles(c.sweep_coverage); },
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_coverage = to_doubles("sweep_coverage_fraction", v);
       }},
      {"sweep_seeds",
       [](const ExperimentConfig& c) {
         return join<std::uint64_t>(c.sweep_seeds,
                                    [](const std::uint64_t& s) { return std::to_string(s); });
       },
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_seeds.clear();
         for (const auto& s : split_list(v)) c.sweep_seeds.push_back(to_u64("sweep_seeds", s));
       }},
      {"sweep_algorithms",
       [](const ExperimentConfig& c) {
         return join<std::string>(c.sweep_algorithms, [](const std::string& s) { return s; });
       },
       [](ExperimentConfig& c, const std::string& v) {
         c.sweep_algorithms = split_list(v);
         for (const auto& a : c.sweep_algorithms) {
           try {
             baselines::parse_algorithm(a);
           } catch (const std::invalid_argument& e) {
             throw SchemaError(std::string("sweep_algorithms: ") + e.what());
           }
         }
       }},
      {"output_dir", [](const ExperimentConfig& c) { return c.output_dir; },
       [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  return kFields;
}

const Field& find_field(const std::string& key) {
  for (const Field& f : fields())
    if (f.key == key) return f;
  throw SchemaError("unknown key '" + key + "'");
}

void apply_full_scale(ExperimentConfig& c) {
  c.physics.geometry.grid_rows = 19;
  c.physics.geometry.grid_cols = 19;
  c.outer_iterations = 20;
  c.episodes_per_iteration = 50;
  c.trainer.steps_per_episode = 200;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UnitError(message);
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

mfg::SolverConfig ExperimentConfig::solver() const {
  mfg::SolverConfig s;
  s.trainer = trainer;
  s.outer_iterations = outer_iterations;
  s.episodes_per_iteration = episodes_per_iteration;
  s.tolerance = tolerance;
  s.propagation = propagation;
  s.flush_buffer = flush_buffer;
  s.reinitialize = reinitialize;
  s.seed = seed;
  return s;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.physics.geometry.grid_rows = 19;
  c.physics.geometry.grid_cols = 19;
  c.physics.channel = env::ChannelParams::for_altitude(c.physics.geometry.altitude);
  c.physics.link.eta = env::db_to_linear(c.eta_db);
  c.physics.link.noise = env::dbm_to_watts(c.n0_dbm);
  c.physics.energy.power_levels.clear();
  for (double mw : c.power_levels_mw) c.physics.energy.power_levels.push_back(mw * 1e-3);
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const Field& f : fields()) out.push_back(f.key);
  return out;
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ParseError("expected key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  const std::string value = trim(assignment.substr(eq + 1));
  if (key == "full_scale") {
    config.full_scale = to_bool(key, value);
    if (config.full_scale) apply_full_scale(config);
    return;
  }
  find_field(key).set(config, value);
}

ExperimentConfig parse_config(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    find_field(key);
    if (!seen.insert(key).second) throw SchemaError("duplicate key '" + key + "'");
    entries.emplace_back(std::move(key), trim(line.substr(eq + 1)));
  }

  ExperimentConfig c = default_config();
  // The preset goes first so explicit keys override it.
  for (const auto& [k, v] : entries)
    if (k == "full_scale") apply_override(c, k + "=" + v);
  for (const auto& [k, v] : entries)
    if (k != "full_scale") find_field(k).set(c, v);
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
  const auto& p = c.physics;
  require(probability(p.demand.p), "demand_p must lie in [0, 1]");
  require(probability(p.demand.q), "demand_q must lie in [0, 1]");
  require(p.geometry.grid_rows >= 1 && p.geometry.grid_cols >= 1, "grid must have >= 1 cell");
  require(p.geometry.cell_side > 0.0, "cell_side_m must be > 0");
  require(p.geometry.altitude > 0.0, "altitude_m must be > 0");
  for (const auto& g : p.geometry.gu_offsets)
    require(std::abs(g.x) < p.geometry.cell_side / 2 && std::abs(g.y) < p.geometry.cell_side / 2,
            "GUs must lie strictly inside their cell");
  require(p.channel.a_los > 0.0 && p.channel.a_nlos > 0.0, "reference path losses must be > 0");
  require(p.channel.nakagami_m >= 1.0, "nakagami_m must be >= 1");
  require(p.channel.omega > 0.0, "fading_omega must be > 0");
  require(p.link.eta > 0.0, "eta must be positive");
  require(p.link.bandwidth > 0.0, "bandwidth_hz must be > 0");
  require(p.link.tau1 > 0.0 && p.link.tau2 > 0.0, "tau1_s and tau2_s must be > 0");
  require(std::abs(p.link.tau1 + p.link.tau2 - p.link.tau) < 1e-9, "tau1_s + tau2_s must equal tau_s");
  require(p.link.noise > 0.0, "n0 must be positive");
  const auto& pw = p.energy.power_levels;
  require(pw.size() >= 2, "power_levels_mw needs zero and at least one positive level");
  require(pw.front() == 0.0, "power_levels_mw must start at 0");
  for (std::size_t i = 1; i < pw.size(); ++i)
    require(pw[i] > pw[i - 1], "power_levels_mw must be strictly ascending");
  require(p.energy.circuit_power >= 0.0, "circuit_power_w must be >= 0");
  require(p.energy.harvest_efficiency >= 0.0 && p.energy.harvest_efficiency <= 1.0,
          "harvest_efficiency must lie in [0, 1]");
  require(p.energy.panel_area >= 0.0 && p.energy.irradiance >= 0.0,
          "panel area and irradiance must be >= 0");
  require(p.energy.cloud_absorption >= 0.0, "cloud_absorption_per_m must be >= 0");
  require(!p.energy.cloud_levels.empty(), "cloud_levels_m must not be empty");
  for (double d : p.energy.cloud_levels) require(d >= 0.0, "cloud_levels_m must be >= 0");
  require(p.energy.battery_max > p.energy.battery_alarm && p.energy.battery_alarm > 0.0,
          "need battery_max_j > battery_alarm_j > 0");
  require(p.energy.energy_levels >= 1, "energy_levels must be >= 1");
  require(p.energy.max_speed > 0.0, "max_speed_mps must be > 0");
  require(p.reward.sigma >= 0.0 && p.reward.xi >= 0.0, "penalty factors must be >= 0");

  const auto& t = c.trainer;
  require(t.gamma >= 0.0 && t.gamma < 1.0, "gamma must lie in [0, 1)");
  require(t.learning_rate > 0.0, "learning_rate must be > 0");
  require(t.minibatch >= 1 && t.replay_capacity >= t.minibatch,
          "need 1 <= minibatch <= replay_capacity");
  require(t.target_period >= 1, "target_period must be >= 1");
  require(t.steps_per_episode >= 1, "steps_per_episode must be >= 1");
  require(t.reward_scale > 0.0, "reward_scale must be > 0");
  require(!t.hidden.empty(), "hidden_layers must not be empty");
  for (int h : t.hidden) require(h >= 1, "hidden layer widths must be >= 1");
  require(t.divergence_factor > 1.0, "divergence_factor must be > 1");
  try {
    c.learners.validate();
  } catch (const std::invalid_argument& e) {
    throw UnitError(e.what());
  }
  for (double f : {c.learners.entropy.fraction, c.learners.epsilon.fraction,
                   c.learners.temperature.fraction})
    require(f > 0.0 && f <= 1.0, "schedule fractions must lie in (0, 1]");

  require(c.outer_iterations >= 1 && c.episodes_per_iteration >= 1,
          "outer_iterations and episodes_per_iteration must be >= 1");
  require(c.tolerance > 0.0, "tolerance_tv must be > 0");
  require(c.propagation.slots >= 1 && c.propagation.average_last >= 1 &&
              c.propagation.average_last <= c.propagation.slots,
          "need 1 <= propagation_average_slots <= propagation_slots");
  require(probability(c.coverage), "coverage_fraction must lie in [0, 1]");
  require(c.staleness_cap >= 1, "staleness_cap must be >= 1");
  require(c.eval_episodes >= 1 && c.eval_slots >= 1, "evaluation needs >= 1 episode and slot");
  require(c.metrics_window >= 1, "metrics_window must be >= 1");
  require(c.removal_count >= 0 && c.removal_count < p.geometry.num_cells() - 1,
          "removal_count must leave the representative and one other UAV");
  require(c.robustness_episodes >= 2 && c.removal_episode >= 1 &&
              c.removal_episode < c.robustness_episodes,
          "need 1 <= removal_episode < robustness_episodes");
  for (double q : c.sweep_q) require(probability(q), "sweep_q values must lie in [0, 1]");
  for (double s : c.sweep_sigma) require(s >= 0.0, "sweep_sigma_per_w_s values must be >= 0");
  for (double v : c.sweep_coverage)
    require(probability(v), "sweep_coverage_fraction values must lie in [0, 1]");
}

std::string to_text(const ExperimentConfig& config) {
  std::string out;
  for (const Field& f : fields()) {
    if (f.key == "full_scale") continue;  // already folded into the other keys
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_text(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace uavmf::harness
