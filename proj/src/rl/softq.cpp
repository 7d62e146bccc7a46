#include "uavmf/rl/softq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavmf::rl {

namespace {

bool allowed(const ActionMask& mask, std::size_t a) { return mask.empty() || mask[a] != 0; }

double masked_max(std::span<const double> q, const ActionMask& mask) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < q.size(); ++a)
    if (allowed(mask, a)) best = std::max(best, q[a]);
  if (!std::isfinite(best)) throw std::invalid_argument("no feasible action");
  return best;
}

}  // namespace

double soft_value(std::span<const double> q, double phi, const ActionMask& mask) {
  const double top = masked_max(q, mask);
  if (phi <= 0.0) return top;
  double sum = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a)
    if (allowed(mask, a)) sum += std::exp((q[a] - top) / phi);
  return top + phi * std::log(sum);
}

std::vector<double> soft_policy(std::span<const double> q, double phi, const ActionMask& mask) {
  std::vector<double> pi(q.size(), 0.0);
  if (phi <= 0.0) {
    pi[greedy_action(q, mask)] = 1.0;
    return pi;
  }
  const double top = masked_max(q, mask);
  double sum = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!allowed(mask, a)) continue;
    pi[a] = std::exp((q[a] - top) / phi);
    sum += pi[a];
  }
  for (double& p : pi) p /= sum;
  return pi;
}

int greedy_action(std::span<const double> q, const ActionMask& mask) {
  int best = -1;
  for (std::size_t a = 0; a < q.size(); ++a) {
    if (!allowed(mask, a)) continue;
    if (best < 0 || q[a] > q[best]) best = static_cast<int>(a);
  }
  if (best < 0) throw std::invalid_argument("no feasible action");
  return best;
}

double td_target(double r, std::span<const double> next_q, double gamma, double phi,
                 const ActionMask& next_mask) {
  if (gamma == 0.0) return r;
  return r + gamma * soft_value(next_q, phi, next_mask);
}

LossGradient loss_and_gradient(const Mlp& net, const Mlp& target, const Minibatch& batch,
                               double gamma, double phi, TargetKind kind) {
  const int n = batch.size();
  if (n == 0) throw std::invalid_argument("loss_and_gradient: empty minibatch");

  Mlp::Tape tape;
  const Eigen::MatrixXd q = net.forward(batch.states, &tape);
  const Eigen::MatrixXd next_q = target.forward(batch.next_states);

  LossGradient out;
  out.targets.resize(n);
  Eigen::MatrixXd grad_out = Eigen::MatrixXd::Zero(q.rows(), q.cols());
  double loss = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::span<const double> nq(next_q.col(i).data(), static_cast<std::size_t>(next_q.rows()));
    const ActionMask& mask = batch.next_masks.empty() ? ActionMask{} : batch.next_masks[i];
    const double y = kind == TargetKind::kSoft
                         ? td_target(batch.rewards[i], nq, gamma, phi, mask)
                         : batch.rewards[i] + gamma * soft_value(nq, 0.0, mask);
    out.targets[i] = y;
    const double residual = q(batch.actions[i], i) - y;
    loss += 0.5 * residual * residual;
    grad_out(batch.actions[i], i) = residual / n;
  }
  out.loss = loss / n;
  if (!std::isfinite(out.loss)) throw TrainingDiverged("non-finite loss");
  out.grads = net.backward(tape, grad_out);
  return out;
}

}  // namespace uavmf::rl
