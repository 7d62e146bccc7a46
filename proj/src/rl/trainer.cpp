#include "uavmf/rl/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "uavmf/baselines/exploration.hpp"
#include "uavmf/rl/checkpoint.hpp"

namespace uavmf::rl {

double Schedule::at(std::int64_t step, std::int64_t horizon) const {
  const double span = fraction * static_cast<double>(std::max<std::int64_t>(horizon, 1));
  if (span <= 0.0) return end;
  const double t = std::min(1.0, static_cast<double>(step) / span);
  return start + (end - start) * t;
}

DqnTrainer::DqnTrainer(int feature_width, int num_actions, TrainerConfig config, LearnerRule rule,
                       std::uint64_t seed)
    : feature_width_(feature_width),
      num_actions_(num_actions),
      config_(std::move(config)),
      rule_(rule),
      seed_(seed),
      rng_(stream_seed(seed, 0x7472616eULL)),
      buffer_(static_cast<std::size_t>(config_.replay_capacity)) {
  reinitialize();
}

void DqnTrainer::reinitialize() {
  Rng init(stream_seed(seed_, 0x696e6974ULL, static_cast<std::uint64_t>(episodes_done_)));
  net_ = std::make_shared<Mlp>(feature_width_, config_.hidden, num_actions_, init);
  target_ = *net_;
  adam_ = Adam(*net_, AdamConfig{config_.learning_rate});
}

Policy DqnTrainer::behaviour_policy() const {
  Policy p{std::make_shared<const Mlp>(*net_), PolicyKind::kSoft, schedule_value()};
  switch (rule_.exploration) {
    case Exploration::kSoft: p.kind = PolicyKind::kSoft; break;
    case Exploration::kEpsilonGreedy: p.kind = PolicyKind::kEpsilonGreedy; break;
    case Exploration::kBoltzmann: p.kind = PolicyKind::kBoltzmann; break;
  }
  return p;
}

Policy DqnTrainer::final_policy() const {
  if (rule_.exploration == Exploration::kSoft) return behaviour_policy();
  return greedy_policy();
}

Policy DqnTrainer::greedy_policy() const {
  return Policy{std::make_shared<const Mlp>(*net_), PolicyKind::kGreedy, 0.0};
}

int DqnTrainer::select_action(std::span<const double> q, const ActionMask& mask) {
  const double param = schedule_value();
  switch (rule_.exploration) {
    case Exploration::kSoft:
      return baselines::sample_categorical(soft_policy(q, param, mask), rng_);
    case Exploration::kEpsilonGreedy:
      return baselines::epsilon_greedy_action(q, param, mask, rng_);
    case Exploration::kBoltzmann:
      return baselines::boltzmann_action(q, param, mask, rng_);
  }
  return 0;
}

double DqnTrainer::update() {
  const std::size_t n = std::min<std::size_t>(config_.minibatch, buffer_.size());
  const Minibatch batch = buffer_.sample(n, rng_);
  const double phi = rule_.target == TargetKind::kSoft ? schedule_value() : 0.0;
  LossGradient lg = loss_and_gradient(*net_, target_, batch, config_.gamma, phi, rule_.target);
  adam_.step(*net_, lg.grads);
  ++updates_;
  if (updates_ % config_.target_period == 0) target_ = *net_;

  if (!net_->all_finite()) throw TrainingDiverged("non-finite network parameters");
  loss_ema_ = updates_ == 1 ? lg.loss : 0.99 * loss_ema_ + 0.01 * lg.loss;
  if (updates_ == config_.divergence_warmup) loss_reference_ = std::max(loss_ema_, 1e-12);
  if (loss_reference_ > 0.0 && loss_ema_ > config_.divergence_factor * loss_reference_ &&
      loss_ema_ > 1.0) {
    std::ostringstream msg;
    msg << "training diverged: moving-average loss " << loss_ema_ << " exceeds "
        << config_.divergence_factor << "x reference " << loss_reference_ << " after "
        << updates_ << " updates";
    throw TrainingDiverged(msg.str());
  }
  return lg.loss;
}

std::vector<EpisodeStats> DqnTrainer::train(Environment& env, int episodes, int meanfield_tag) {
  const std::size_t starts = config_.learning_starts > 0
                                 ? static_cast<std::size_t>(config_.learning_starts)
                                 : static_cast<std::size_t>(config_.minibatch);
  std::vector<EpisodeStats> out;
  std::vector<double> x, x_next;
  for (int ep = 0; ep < episodes; ++ep) {
    EpisodeStats st;
    st.episode = episodes_done_;
    double loss_sum = 0.0;
    int loss_n = 0;
    env.reset(rng_);
    env.features(x);
    ActionMask mask = env.feasible_mask();
    for (int t = 0; t < config_.steps_per_episode; ++t) {
      const Eigen::VectorXd qv = net_->forward_one(x);
      const int a = select_action(std::span<const double>(qv.data(), qv.size()), mask);
      const StepInfo info = env.step(a, rng_);
      env.features(x_next);
      ActionMask next_mask = env.feasible_mask();

      buffer_.push({x, a, info.reward * config_.reward_scale, x_next, next_mask, meanfield_tag});
      if (buffer_.size() >= std::min(starts, buffer_.capacity())) {
        loss_sum += update();
        ++loss_n;
      }
      ++global_step_;

      st.mean_reward += info.reward;
      st.mean_ee += info.ee;
      st.mean_penalty += info.interference_penalty;
      st.flying_probability += info.flew ? 1.0 : 0.0;
      st.mean_power_w += info.power_w;
      ++st.steps;

      x.swap(x_next);
      mask.swap(next_mask);
    }
    const double n = std::max(st.steps, 1);
    st.mean_reward /= n;
    st.mean_ee /= n;
    st.mean_penalty /= n;
    st.flying_probability /= n;
    st.mean_power_w /= n;
    st.mean_loss = loss_n > 0 ? loss_sum / loss_n : 0.0;
    out.push_back(st);
    ++episodes_done_;
  }
  return out;
}

void DqnTrainer::save(std::ostream& out) const {
  using namespace checkpoint_io;
  write_header(out);
  write_pod(out, static_cast<std::int32_t>(feature_width_));
  write_pod(out, static_cast<std::int32_t>(num_actions_));
  write_network(out, *net_);
  write_network(out, target_);
  const AdamState& a = adam_.state();
  write_pod(out, a.t);
  write_vector(out, a.m);
  write_vector(out, a.v);
  std::ostringstream rng_state;
  rng_state << rng_;
  write_string(out, rng_state.str());
  write_pod(out, horizon_);
  write_pod(out, global_step_);
  write_pod(out, updates_);
  write_pod(out, static_cast<std::int32_t>(episodes_done_));
  write_pod(out, loss_ema_);
  write_pod(out, loss_reference_);
  write_buffer(out, buffer_);
}

void DqnTrainer::load(std::istream& in) {
  using namespace checkpoint_io;
  read_header(in);
  if (read_pod<std::int32_t>(in) != feature_width_ || read_pod<std::int32_t>(in) != num_actions_)
    throw CheckpointError("checkpoint shape does not match trainer");
  read_network(in, *net_);
  read_network(in, target_);
  AdamState& a = adam_.state();
  a.t = read_pod<std::int64_t>(in);
  a.m = read_vector(in);
  a.v = read_vector(in);
  std::istringstream rng_state(read_string(in));
  rng_state >> rng_;
  horizon_ = read_pod<std::int64_t>(in);
  global_step_ = read_pod<std::int64_t>(in);
  updates_ = read_pod<std::int64_t>(in);
  episodes_done_ = read_pod<std::int32_t>(in);
  loss_ema_ = read_pod<double>(in);
  loss_reference_ = read_pod<double>(in);
  read_buffer(in, buffer_);
}

Policy train_best_response(Environment& env, int episodes, const TrainerConfig& config,
                           const Schedule& entropy, std::uint64_t seed) {
  DqnTrainer trainer(env.feature_width(), env.num_actions(), config,
                     LearnerRule{Exploration::kSoft, TargetKind::kSoft, entropy}, seed);
  trainer.set_horizon(static_cast<std::int64_t>(episodes) * config.steps_per_episode);
  trainer.train(env, episodes);
  return trainer.final_policy();
}

}  // namespace uavmf::rl
