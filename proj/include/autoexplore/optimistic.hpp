#pragma once

#include <vector>

#include "autoexplore/counts.hpp"
#include "autoexplore/mdp.hpp"
#include "autoexplore/ssp.hpp"

namespace autoexplore {

// Optimistic restricted SSP instance over K ∪ {x} with a designated real
// goal state. Layout of the embedded SspProblem:
//   states 0..|K|-1  : the states of K, in the given order
//   state  |K|       : the aggregate outside state x (reset-only)
//   state  |K|+1     : the goal (absorbing)
// For (s,a) in K x A the empirical row over K ∪ {goal} is shrunk by the
// per-destination bonus (clamped at zero), the residual out-of-set mass (also
// shrunk, by the summed bonus) goes to x, and all slack is granted to the
// goal. The x row and the model of the goal carry no uncertainty. The reset
// at x charges its usual cost, so a detour through the outside costs the
// entry step plus the reset step, matching the full-space restricted MDP in
// which every out-of-set state only offers a unit-cost reset.
struct OptimisticInstance {
  std::vector<int> k_states;  // real ids in instance order
  int goal_state = -1;        // real id
  int x_index = -1;           // instance index of x
  int goal_index = -1;        // instance index of the goal
  SspProblem ssp;

  int index_of(int real_state) const;  // -1 if not in K
};

// Preconditions (throws std::invalid_argument): goal not in K, start in K.
// With all-zero counts the optimistic row puts probability 1 on the goal.
// The bonus is Bernstein at confidence params.delta in theoretical mode and
// the constant-free planning bonus in practical mode.
OptimisticInstance build_optimistic_instance(const CountsTable& counts,
                                             const std::vector<int>& K,
                                             int goal_state,
                                             const AlgoParams& params,
                                             int start_state);

struct OviResult {
  std::vector<double> u;       // per instance state (x and goal included)
  double u_start = 0.0;        // value at the start state
  DeterministicPolicy policy;  // per real env state; reset outside K
  int sweeps = 0;
  bool converged = false;
};

// Optimistic value iteration for reaching `goal_state` using K only:
// builds the optimistic instance and runs vi_ssp to precision gamma_vi.
// The returned policy takes the greedy action inside K and the reset action
// everywhere else.
OviResult ovi_ssp(const CountsTable& counts, const std::vector<int>& K,
                  int goal_state, const AlgoParams& params, double gamma_vi,
                  int reset_action, int start_state);

// Cost-weighted variant: unit costs are replaced by env_costs[s*A + a] for
// states in K; the reset at x charges the cost of resetting from the start
// state (a single aggregate stand-in for the outside resets), and the goal
// stays zero-cost absorbing.
OviResult ovi_ssp_cost(const CountsTable& counts, const std::vector<int>& K,
                       int goal_state, const AlgoParams& params,
                       double gamma_vi, int reset_action, int start_state,
                       const std::vector<double>& env_costs);

}  // namespace autoexplore
