#pragma once

#include <utility>
#include <vector>

#include "uavmf/rl/softq.hpp"

namespace uavmf::rl {

// Finite MDP with explicit sparse transitions.
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;
  std::vector<double> reward;  // [s * num_actions + a]
  std::vector<std::vector<std::pair<int, double>>> transitions;  // [s * num_actions + a]
  std::vector<ActionMask> masks;  // per state; empty means all actions

  int cell(int s, int a) const { return s * num_actions + a; }
  bool allowed(int s, int a) const { return masks.empty() || masks[s].empty() || masks[s][a]; }
};

struct SoftValueResult {
  std::vector<double> q;          // [s * num_actions + a], masked entries are 0
  std::vector<double> residuals;  // sup-norm change per sweep
  int iterations = 0;
  bool converged = false;

  double q_at(int s, int a, int num_actions) const { return q[s * num_actions + a]; }
};

// Iterates Q(s,a) <- r(s,a) + gamma * sum_s' P(s'|s,a) V_phi(s') until the
// sup-norm change drops below tol. phi <= 0 gives the hard max.
SoftValueResult tabular_soft_value_iteration(const TabularMdp& mdp, double gamma, double phi,
                                             double tol, int max_iterations = 100000);

// One application of the soft Bellman operator, returning its sup-norm
// change from `q`.
double bellman_residual(const TabularMdp& mdp, const std::vector<double>& q, double gamma,
                        double phi);

std::vector<int> tabular_greedy(const TabularMdp& mdp, const std::vector<double>& q);
// Per-state soft policy rows, [s * num_actions + a].
std::vector<double> tabular_soft_policy(const TabularMdp& mdp, const std::vector<double>& q,
                                        double phi);

}  // namespace uavmf::rl
