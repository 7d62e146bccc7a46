#include "uavmf/rl/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace uavmf::rl {

namespace {

std::span<const double> row(const std::vector<double>& q, int s, int n) {
  return std::span<const double>(q.data() + static_cast<std::size_t>(s) * n, n);
}

const ActionMask& mask_of(const TabularMdp& mdp, int s) {
  static const ActionMask kAll;
  return mdp.masks.empty() ? kAll : mdp.masks[s];
}

std::vector<double> apply_operator(const TabularMdp& mdp, const std::vector<double>& q,
                                   double gamma, double phi) {
  std::vector<double> v(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s)
    v[s] = soft_value(row(q, s, mdp.num_actions), phi, mask_of(mdp, s));
  std::vector<double> next(q.size(), 0.0);
  for (int s = 0; s < mdp.num_states; ++s) {
    for (int a = 0; a < mdp.num_actions; ++a) {
      if (!mdp.allowed(s, a)) continue;
      const int c = mdp.cell(s, a);
      double ev = 0.0;
      for (const auto& [sp, p] : mdp.transitions[c]) ev += p * v[sp];
      next[c] = mdp.reward[c] + gamma * ev;
    }
  }
  return next;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

SoftValueResult tabular_soft_value_iteration(const TabularMdp& mdp, double gamma, double phi,
                                             double tol, int max_iterations) {
  SoftValueResult out;
  out.q.assign(static_cast<std::size_t>(mdp.num_states) * mdp.num_actions, 0.0);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> next = apply_operator(mdp, out.q, gamma, phi);
    const double r = sup_diff(next, out.q);
    out.q = std::move(next);
    out.residuals.push_back(r);
    out.iterations = it + 1;
    if (r < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double bellman_residual(const TabularMdp& mdp, const std::vector<double>& q, double gamma,
                        double phi) {
  return sup_diff(apply_operator(mdp, q, gamma, phi), q);
}

std::vector<int> tabular_greedy(const TabularMdp& mdp, const std::vector<double>& q) {
  std::vector<int> out(mdp.num_states);
  for (int s = 0; s < mdp.num_states; ++s)
    out[s] = greedy_action(row(q, s, mdp.num_actions), mask_of(mdp, s));
  return out;
}

std::vector<double> tabular_soft_policy(const TabularMdp& mdp, const std::vector<double>& q,
                                        double phi) {
  std::vector<double> out(q.size(), 0.0);
  for (int s = 0; s < mdp.num_states; ++s) {
    std::vector<double> p;
    if (phi > 0.0) {
      p = soft_policy(row(q, s, mdp.num_actions), phi, mask_of(mdp, s));
    } else {
      p.assign(mdp.num_actions, 0.0);
      p[greedy_action(row(q, s, mdp.num_actions), mask_of(mdp, s))] = 1.0;
    }
    std::copy(p.begin(), p.end(), out.begin() + static_cast<std::ptrdiff_t>(s) * mdp.num_actions);
  }
  return out;
}

}  // namespace uavmf::rl
