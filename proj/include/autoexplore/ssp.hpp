#pragma once

#include <vector>

#include "autoexplore/mdp.hpp"

namespace autoexplore {

// Stochastic shortest-path instance over states 0..num_states-1 with one
// designated absorbing goal. Each state has its own list of action slots;
// slot data (cost, next-state distribution) is stored row-per-slot.
//
// Costs live in [0, 1]; instances used with the generic planner are expected
// to keep all costs >= some c_min > 0 so that improper policies have infinite
// value.
struct SspProblem {
  int num_states = 0;
  int goal = 0;

  // slot_offset[s]..slot_offset[s+1] index the slots of state s.
  std::vector<int> slot_offset;
  std::vector<double> cost;  // per slot
  std::vector<double> p;     // per slot: num_states entries

  int num_slots() const { return static_cast<int>(cost.size()); }
  int slots_of(int s) const { return slot_offset[s + 1] - slot_offset[s]; }
  const double* row(int slot) const {
    return p.data() + static_cast<std::size_t>(slot) * num_states;
  }
  double min_cost() const;

  // Throws std::invalid_argument if shapes mismatch, costs leave [0, 1],
  // a non-goal state has no slots, or a row does not sum to 1 within 1e-9.
  void validate() const;

  // True iff from every state the goal is reachable in the support graph of
  // some action sequence, i.e. a proper policy exists.
  bool has_proper_policy() const;
};

// Builder helper for incremental construction.
struct SspBuilder {
  int num_states;
  int goal;
  std::vector<std::vector<double>> rows;   // per state: flat slot rows
  std::vector<std::vector<double>> costs;  // per state: slot costs

  SspBuilder(int n, int goal_state)
      : num_states(n), goal(goal_state), rows(n), costs(n) {}
  // Adds a slot for state s; row must have num_states entries.
  void add_slot(int s, double cost, const std::vector<double>& row);
  SspProblem build() const;
};

struct VsspResult {
  std::vector<double> value;   // fixed point approximation, value[goal] == 0
  std::vector<int> policy;     // greedy slot index per state (0 at goal)
  int sweeps = 0;
  bool converged = false;
};

// Value iteration for SSP: u_0 = 0, Jacobi sweeps of the Bellman operator
//   (Lu)(s) = min_slot { c(s,slot) + sum_y p(y|s,slot) u(y) }
// until ||u_{n+1} - u_n||_inf <= gamma_vi, capped at 1e7 sweeps. The greedy
// policy breaks ties toward the lowest slot index. Iterates from zero are
// monotonically non-decreasing.
VsspResult vi_ssp(const SspProblem& ssp, double gamma_vi);

// Exact policy evaluation on the instance (linear solve); +inf if improper.
std::vector<double> ssp_policy_value(const SspProblem& ssp,
                                     const std::vector<int>& policy);

// Near-exact optimal values (value iteration to 1e-12), for test oracles.
std::vector<double> ssp_optimal_value(const SspProblem& ssp);

}  // namespace autoexplore
