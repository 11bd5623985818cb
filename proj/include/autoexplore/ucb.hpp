#pragma once

#include <cstdint>
#include <vector>

#include "autoexplore/exploration.hpp"

namespace autoexplore {

// Configuration of the finite-horizon rollout-based explorer.
struct UcbConfig {
  AlgoParams params;

  enum class Bonus { kBernstein, kHoeffding };
  // Exploration bonus of the optimistic backward induction at stage h.
  // Bernstein: sqrt(Var_{s'~p̂}[V_{h+1}] / (N̲ ∨ 1)) + (H-h) / (N̲ ∨ 1);
  // Hoeffding: (H-h) / sqrt(N̲ ∨ 1).
  Bonus bonus = Bonus::kBernstein;
  // Multiplier on both bonus terms; 0 disables optimism (useful to compare
  // the induction against exact dynamic programming).
  double bonus_scale = 1.0;

  enum class Objective { kWindowed, kFullHorizon };
  // Reward window of the plan. kWindowed collects the goal reward only when
  // the goal is reached within floor(L + success_slack * eps) steps, i.e. the
  // plan optimizes the same budget the round test accepts; kFullHorizon
  // rewards any arrival within H steps (kept for comparison; with optimism
  // every known route saturates at probability 1, so plans degenerate to
  // tie-breaks and slow routes are never abandoned).
  Objective objective = Objective::kWindowed;

  // Use N̲ = N / H instead of N in the confidence terms (as if the samples
  // were split across the stages).
  bool bucketed_counts = true;
  // Multiply the per-round episode budget by max(ln|K|^2, 1).
  bool episode_log_factor = false;

  // A round succeeds when the empirical resetting estimate
  // (v̂ + q̂)/(1 - q̂) is <= L + success_slack * eps.
  double success_slack = 2.0;
  // A candidate stays in the pool while its optimistic resetting value is
  // <= L + candidate_slack * eps; the run stops when the pool empties.
  double candidate_slack = 1.0;

  // Stop a round as soon as the success test can no longer pass even if
  // every remaining episode reached the goal in one step (pure arithmetic,
  // no extra randomness involved). Off by default: rounds are all-or-nothing
  // and a failed round costs its full episode budget.
  bool abort_hopeless = false;

  // Minimum sample count per known state-action pair maintained before each
  // round (transitions from evaluation rollouts count toward it);
  // 0 means ceil(L^3 / epsilon^2).
  std::int64_t discovery_target = 0;

  std::int64_t step_cap = 1'000'000'000;
  int curve_stride = 100;
};

// Rollout horizon ceil(L + L^2 / eps).
int ucb_horizon(const AlgoParams& params);

// Reward window of the plan: min(H, floor(L + success_slack * eps)) under
// Objective::kWindowed, H under Objective::kFullHorizon.
int ucb_plan_window(const UcbConfig& cfg);

// Episodes per evaluation round: ceil(factor * (L/eps)^3) in practical mode
// (factor = max(ln|K|^2, 1) if episode_log_factor else 1); the constant- and
// log-bearing variant ceil(6 (L/eps)^3 * ln(16 |K|^2 / delta)) in
// theoretical mode.
std::int64_t ucb_episode_budget(const UcbConfig& cfg, int k_size);

// Optimistic finite-horizon plan for reaching `goal` with policies restricted
// to K: backward induction over the meta model (K, aggregate outside state,
// goal) using the empirical stationary kernel and stage-dependent bonuses.
// Three passes share the plan's stage actions: the windowed success
// probability (maximized, selects the actions), the truncated expected time
// of the chosen actions and their success probability over the full horizon
// (both evaluated optimistically, for the pool test). A bonus-free replay of
// the window pass yields the empirical reward, used to break selection ties
// between optimism-saturated candidates.
struct FiniteHorizonPlan {
  // stage_actions[h][i] is the action of the i-th K-state at stage h.
  std::vector<std::vector<int>> stage_actions;
  double opt_window_reward = 0.0;    // optimistic P(tau <= window) from start
  double emp_window_reward = 0.0;    // same recursion with bonuses off
  double opt_truncated_value = 0.0;  // optimistic E[min(tau, H)] from start
  double opt_failure_prob = 0.0;     // optimistic P(tau > H) from start
  double opt_resetting_value = 0.0;  // from the two values above

  // Expands the stage plan to per-env-state policies (reset outside K).
  std::vector<DeterministicPolicy> expand(const std::vector<int>& K,
                                          int num_states, int num_actions,
                                          int reset_action) const;
};
FiniteHorizonPlan finite_horizon_plan(const CountsTable& counts,
                                      const std::vector<int>& K, int goal,
                                      const UcbConfig& cfg, int reset_action,
                                      int start_state);

// Evaluation round: up to `episodes` rollouts of the plan from the start
// state (a reset step is executed between episodes when needed), each ending
// at the goal or after H steps. Success iff the round ran its full budget,
// q̂ < 1 and (v̂ + q̂)/(1 - q̂) <= L + success_slack * eps.
struct RoundOutcome {
  bool success = false;
  double v_hat = 0.0;       // mean of min(tau, H)
  double q_hat = 0.0;       // fraction of failed episodes
  double resetting = 0.0;   // (v̂ + q̂)/(1 - q̂), +inf when q̂ == 1
  std::int64_t episodes = 0;
};
RoundOutcome evaluate_round(EnvRunner& runner,
                            const std::vector<DeterministicPolicy>& stage_pi,
                            int goal, std::int64_t episodes,
                            const UcbConfig& cfg);

// Full run: alternates state-discovery top-ups and candidate evaluation
// rounds (picking the pool candidate with the largest optimistic windowed
// reward; ties prefer the larger bonus-free window reward, then fewer failed
// rounds, then earlier discovery) until the pool is empty. Accepted policies
// are the evaluated stage plans.
ExplorationResult ucb_run(const TabularMdp& env, const UcbConfig& cfg,
                          std::uint64_t seed,
                          const std::vector<int>* target_set = nullptr);

}  // namespace autoexplore
