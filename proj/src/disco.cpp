#include "autoexplore/disco.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace autoexplore {

namespace {

// Dispersion of pair (s,a) over the set K: (sum_{s' in K} std(s'))^2.
double theta_hat(const CountsTable& counts, const std::vector<int>& K, int s,
                 int a) {
  double sum = 0.0;
  for (int y : K) {
    const double ph = counts.p_hat(s, a, y);
    sum += std::sqrt(ph * (1.0 - ph));
  }
  return sum * sum;
}

// Dispersion over K plus the aggregated out-of-set residual.
double x_term(const CountsTable& counts, const std::vector<int>& K, int s,
              int a) {
  double sum = 0.0;
  double inside = 0.0;
  for (int y : K) {
    const double ph = counts.p_hat(s, a, y);
    inside += ph;
    sum += std::sqrt(ph * (1.0 - ph));
  }
  const double out = std::clamp(1.0 - inside, 0.0, 1.0);
  if (counts.count(s, a) > 0) sum += std::sqrt(out * (1.0 - out));
  return sum;
}

std::int64_t ceil_to_count(double v) {
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}

std::int64_t practical_target(const CountsTable& counts,
                              const std::vector<int>& K, int s, int a,
                              const DiscoConfig& cfg) {
  const double L = cfg.params.L;
  const double eps = cfg.params.epsilon;
  double theta = 0.0;
  if (cfg.per_pair_allocation) {
    theta = theta_hat(counts, K, s, a);
  } else {
    for (int ks : K) {
      for (int ka = 0; ka < counts.num_actions; ++ka) {
        theta = std::max(theta, theta_hat(counts, K, ks, ka));
      }
    }
  }
  const double L2 = L * L;
  const double s_dagger = static_cast<double>(K.size()) + 2.0;
  const double need = L2 * L2 * theta / (eps * eps) + L2 * s_dagger / eps;
  return std::max(ceil_to_count(need), ceil_to_count(L));
}

std::int64_t theoretical_target(const CountsTable& counts,
                                const std::vector<int>& K,
                                const DiscoConfig& cfg) {
  const double L = cfg.params.L;
  const double eps = cfg.params.epsilon;
  const double delta = cfg.params.delta;
  const double S = counts.num_states;
  const double A = counts.num_actions;
  const double gamma =
      2.0 * eps / (12.0 * (L + 1.0 + eps) * (L + eps / 3.0));

  double x = 0.0;
  for (int ks : K) {
    for (int ka = 0; ka < static_cast<int>(A); ++ka) {
      x = std::max(x, x_term(counts, K, ks, ka));
    }
  }
  double variance_part = 0.0;
  if (x > 0.0) {
    const double lg = std::log(8.0 * std::exp(1.0) * x *
                               std::sqrt(2.0 * S * A) /
                               (std::sqrt(delta) * gamma));
    variance_part = 57.0 * x * x / (gamma * gamma) * lg * lg;
  }
  const double s_dagger = static_cast<double>(K.size()) + 2.0;
  const double support_part =
      24.0 * s_dagger / gamma * std::log(24.0 * s_dagger * S * A /
                                         (delta * gamma));
  const std::int64_t need = ceil_to_count(variance_part + support_part);
  const std::int64_t floor_samples =
      ceil_to_count(L * std::log(3.0 * A * L * S / delta));
  return std::max(need, floor_samples);
}

}  // namespace

std::int64_t allocation_target(const CountsTable& counts,
                               const std::vector<int>& K, int s, int a,
                               const DiscoConfig& cfg) {
  if (K.empty()) throw std::invalid_argument("allocation: empty K");
  return cfg.params.mode == AlgoParams::Mode::kPractical
             ? practical_target(counts, K, s, a, cfg)
             : theoretical_target(counts, K, cfg);
}

std::vector<int> restrict_candidates(const CountsTable& counts,
                                     const std::vector<int>& K,
                                     const std::vector<int>& U,
                                     const AlgoParams& params) {
  const double threshold = (1.0 - params.epsilon / 2.0) / params.L;
  std::vector<int> W;
  for (int u : U) {
    bool reachable = false;
    for (int s : K) {
      for (int a = 0; a < counts.num_actions && !reachable; ++a) {
        reachable = counts.p_hat(s, a, u) >= threshold - 1e-12;
      }
      if (reachable) break;
    }
    if (reachable) W.push_back(u);
  }
  return W;
}

ExplorationResult disco_run(const TabularMdp& env, const DiscoConfig& cfg,
                            std::uint64_t seed,
                            const std::vector<int>* target_set) {
  const AlgoParams params = cfg.params.normalized();
  params.validate();
  env.validate();
  const int S = env.num_states;
  const int A = env.num_actions;
  const double gamma_vi = params.epsilon / (6.0 * params.L);
  DiscoConfig round_cfg = cfg;
  round_cfg.params = params;

  EnvRunner runner(env, seed, target_set, cfg.curve_stride, cfg.step_cap);
  ExplorationResult out;
  out.reset_action = env.reset_action;
  out.K.push_back(env.start_state);
  std::vector<char> in_k(S, 0);
  in_k[env.start_state] = 1;
  // Navigation policy per controllable state; the start is reached by
  // resetting from anywhere.
  std::vector<DeterministicPolicy> nav(
      1, DeterministicPolicy(S, env.reset_action));

  StopReason stop = StopReason::kStop1;
  for (int round = 0;; ++round) {
    // -- Collection: bring every pair of K x A up to its allocation target,
    // fixed at the start of the round. Navigation follows the stored policy
    // of the pair's state; every step lands in the shared counts.
    std::vector<std::int64_t> targets;
    targets.reserve(out.K.size() * A);
    for (int i = 0; i < static_cast<int>(out.K.size()); ++i) {
      for (int a = 0; a < A; ++a) {
        targets.push_back(
            allocation_target(runner.counts(), out.K, out.K[i], a, round_cfg));
      }
    }
    for (int i = 0; i < static_cast<int>(out.K.size()); ++i) {
      const int s = out.K[i];
      const DeterministicPolicy& pi = nav[i];
      for (int a = 0; a < A; ++a) {
        const std::int64_t want = targets[static_cast<std::size_t>(i) * A + a];
        while (runner.counts().count(s, a) < want) {
          runner.step(runner.current() == s ? a : pi[runner.current()]);
        }
      }
    }

    // -- Candidate restriction over everything discovered so far.
    std::vector<int> U;
    for (int z : runner.discovery_order()) {
      if (!in_k[z]) U.push_back(z);
    }
    const std::vector<int> W =
        restrict_candidates(runner.counts(), out.K, U, params);
    out.rounds.push_back({runner.steps(), static_cast<int>(out.K.size()),
                          static_cast<int>(W.size())});
    if (W.empty()) {
      stop = StopReason::kStop1;
      out.events.push_back({runner.steps(), "stop: no candidates left"});
      break;
    }

    // -- Optimistic planning toward each candidate; earliest-discovered wins
    // ties of the optimistic value at the start state.
    double best_u = kInf;
    int best_goal = -1;
    OviResult best_plan;
    for (int goal : W) {
      OviResult plan = ovi_ssp(runner.counts(), out.K, goal, params, gamma_vi,
                               env.reset_action, env.start_state);
      if (plan.u_start < best_u - 1e-12) {
        best_u = plan.u_start;
        best_goal = goal;
        best_plan = std::move(plan);
      }
    }
    if (best_u > params.L) {
      stop = StopReason::kStop2;
      out.events.push_back(
          {runner.steps(),
           "stop: best candidate above budget (u=" + std::to_string(best_u) +
               ")"});
      break;
    }

    // -- Transfer.
    out.K.push_back(best_goal);
    in_k[best_goal] = 1;
    nav.push_back(best_plan.policy);
    int k_in_target = 0;
    for (int s : out.K) k_in_target += runner.target_member(s) ? 1 : 0;
    runner.set_k_size(static_cast<int>(out.K.size()), k_in_target);
    out.events.push_back(
        {runner.steps(), "transfer state " + std::to_string(best_goal) +
                             " (u=" + std::to_string(best_u) + ")"});
  }

  // -- Consolidation: recompute every goal policy on the final counts, each
  // restricted to the other controllable states.
  out.stop = stop;
  out.counts = runner.take_counts();
  out.total_steps = out.counts.total_steps;
  out.curve = runner.take_curve();
  for (int i = 0; i < static_cast<int>(out.K.size()); ++i) {
    const int goal = out.K[i];
    if (goal == env.start_state) {
      out.policies.push_back(
          {DeterministicPolicy(S, env.reset_action)});
      continue;
    }
    std::vector<int> rest;
    for (int s : out.K) {
      if (s != goal) rest.push_back(s);
    }
    OviResult plan = ovi_ssp(out.counts, rest, goal, params, gamma_vi,
                             env.reset_action, env.start_state);
    out.policies.push_back({std::move(plan.policy)});
  }
  out.events.push_back(
      {out.total_steps,
       "consolidated " + std::to_string(out.K.size()) + " goal policies"});
  return out;
}

ZeroShotPlan zero_shot_plan(const ExplorationResult& result, int goal,
                            const std::vector<double>& env_costs,
                            const AlgoParams& params, double gamma_vi) {
  const int idx = result.index_in_K(goal);
  if (idx < 0) throw std::invalid_argument("zero-shot: goal not in K");
  const std::size_t expected =
      static_cast<std::size_t>(result.counts.num_states) *
      result.counts.num_actions;
  if (env_costs.size() != expected) {
    throw std::invalid_argument("zero-shot: cost table size mismatch");
  }
  for (double c : env_costs) {
    if (!(c > 0.0) || c > 1.0) {
      throw std::invalid_argument("zero-shot: costs must lie in (0, 1]");
    }
  }
  const int start = result.K.front();
  if (goal == start) {
    // Already there: zero cost, any policy that stays put via reset.
    return {DeterministicPolicy(result.counts.num_states, result.reset_action),
            0.0};
  }
  std::vector<int> rest;
  for (int s : result.K) {
    if (s != goal) rest.push_back(s);
  }
  OviResult plan =
      ovi_ssp_cost(result.counts, rest, goal, params, gamma_vi,
                   result.reset_action, start, env_costs);
  return {std::move(plan.policy), plan.u_start};
}

}  // namespace autoexplore
