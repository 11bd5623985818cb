#pragma once

#include <vector>

#include "autoexplore/mdp.hpp"

namespace autoexplore {

// Expected hitting times v(s -> goal); +inf where the goal is not reached
// with probability one.
struct HittingValues {
  std::vector<double> value;
  bool all_finite() const;
};

// Exact policy evaluation of the hitting time to `goal` under `pi`, with the
// goal made absorbing. States from which the policy does not reach the goal
// almost surely (detected by reachability analysis on the policy's support
// graph) get value +inf; the remaining linear system v = 1 + P_pi v is solved
// directly (dense LU) up to 2000 states, and by Gauss-Seidel beyond that.
HittingValues evaluate_policy_hitting(const TabularMdp& m,
                                      const DeterministicPolicy& pi, int goal);

// Weighted variant: per-(s,a) costs replace the unit step cost.
// costs is indexed [s*A + a] and must be positive on the support of pi.
HittingValues evaluate_policy_cost(const TabularMdp& m,
                                   const DeterministicPolicy& pi, int goal,
                                   const std::vector<double>& costs);

struct RestrictedPlan {
  std::vector<double> value;   // v(s -> goal) for every s
  DeterministicPolicy policy;  // argmin action; reset outside the restriction
};

// Optimal shortest-path values over policies restricted to `restricted`:
// states inside the restriction choose any action, every other state is
// forced to take the reset action; the goal is absorbing. Value iteration to
// sup-norm 1e-10, greedy ties resolved to the lowest action index.
// `restricted` is a membership mask of size num_states. An empty mask means
// no restriction (all states may act).
RestrictedPlan optimal_shortest_path(const TabularMdp& m,
                                     const std::vector<char>& restricted,
                                     int goal);

// Cost-weighted variant of the above; costs indexed [s*A + a], all > 0.
RestrictedPlan optimal_shortest_path_cost(const TabularMdp& m,
                                          const std::vector<char>& restricted,
                                          int goal,
                                          const std::vector<double>& costs);

// The incrementally L-controllable states: batch greedy closure starting from
// {start}; a state joins when its optimal shortest-path value from the start,
// restricted to the previously accepted set, is strictly below L (margin
// 1e-9; the value is confirmed by an exact policy evaluation so states whose
// value sits exactly on L stay out). Returned in ascending state order.
std::vector<int> incrementally_controllable_set(const TabularMdp& m, double L);

// The plain L-controllable states: s qualifies when the best unrestricted
// policy reaches it from the start within L expected steps (non-strict, so a
// value of exactly L is in; tolerance 1e-9). The optimal policy may traverse
// states that are not controllable themselves, which is what separates this
// set from the incremental one. Returned in ascending order.
std::vector<int> controllable_set(const TabularMdp& m, double L);

// Exact truncated evaluation of a policy run for at most H steps:
//   v_h = E[min(tau, H)], q_h = P(tau > H), resetting = (v_h + q_h)/(1 - q_h)
// from the start state, where tau is the hitting time of `goal`. resetting is
// +inf when q_h == 1. The non-stationary overload uses stage_pi[h] at step h
// (H = stage_pi.size()).
struct TruncatedValue {
  double v_h = 0.0;
  double q_h = 0.0;
  double resetting = 0.0;
};
TruncatedValue truncated_value_tail(const TabularMdp& m,
                                    const DeterministicPolicy& pi, int goal,
                                    int H);
TruncatedValue truncated_value_tail(
    const TabularMdp& m, const std::vector<DeterministicPolicy>& stage_pi,
    int goal);

// Horizon after which resetting a near-optimal policy loses at most epsilon:
// ceil(4(L+1) * ceil(ln(4(L+1)/epsilon))).
int effective_horizon(double L, double epsilon);

}  // namespace autoexplore
