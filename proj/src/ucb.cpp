#include "autoexplore/ucb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace autoexplore {

namespace {

std::int64_t ceil_to_count(double v) {
  return static_cast<std::int64_t>(std::ceil(v - 1e-9));
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// Mean and variance of V under a probability row.
struct Moments {
  double mu = 0.0;
  double var = 0.0;
};

Moments row_moments(const std::vector<double>& row,
                    const std::vector<double>& value) {
  Moments m;
  double sq = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    m.mu += row[j] * value[j];
    sq += row[j] * value[j] * value[j];
  }
  m.var = std::max(0.0, sq - m.mu * m.mu);
  return m;
}

double stage_bonus(const Moments& m, double n_eff, double range,
                   const UcbConfig& cfg) {
  const double den = std::max(n_eff, 1.0);
  double b = 0.0;
  if (cfg.bonus == UcbConfig::Bonus::kHoeffding) {
    b = range / std::sqrt(den);
  } else {
    b = std::sqrt(m.var / den) + range / den;
  }
  return cfg.bonus_scale * b;
}

}  // namespace

int ucb_horizon(const AlgoParams& params) {
  const double L = params.L;
  return static_cast<int>(ceil_to_count(L + L * L / params.epsilon));
}

int ucb_plan_window(const UcbConfig& cfg) {
  const int H = ucb_horizon(cfg.params);
  if (cfg.objective == UcbConfig::Objective::kFullHorizon) return H;
  const double budget = cfg.params.L + cfg.success_slack * cfg.params.epsilon;
  const int window = static_cast<int>(std::floor(budget + 1e-9));
  return std::clamp(window, 1, H);
}

std::int64_t ucb_episode_budget(const UcbConfig& cfg, int k_size) {
  if (k_size < 1) throw std::invalid_argument("episode budget: empty K");
  const double ratio = cfg.params.L / cfg.params.epsilon;
  const double base = ratio * ratio * ratio;
  if (cfg.params.mode == AlgoParams::Mode::kTheoretical) {
    const double lg = std::log(16.0 * static_cast<double>(k_size) * k_size /
                               cfg.params.delta);
    return ceil_to_count(6.0 * base * lg);
  }
  double factor = 1.0;
  if (cfg.episode_log_factor) {
    factor = std::max(std::log(static_cast<double>(k_size) * k_size), 1.0);
  }
  return ceil_to_count(factor * base);
}

std::vector<DeterministicPolicy> FiniteHorizonPlan::expand(
    const std::vector<int>& K, int num_states, int num_actions,
    int reset_action) const {
  (void)num_actions;
  std::vector<DeterministicPolicy> stages;
  stages.reserve(stage_actions.size());
  for (const std::vector<int>& acts : stage_actions) {
    DeterministicPolicy pi(num_states, reset_action);
    for (std::size_t i = 0; i < K.size(); ++i) pi[K[i]] = acts[i];
    stages.push_back(std::move(pi));
  }
  return stages;
}

FiniteHorizonPlan finite_horizon_plan(const CountsTable& counts,
                                      const std::vector<int>& K, int goal,
                                      const UcbConfig& cfg, int reset_action,
                                      int start_state) {
  (void)reset_action;
  const int k = static_cast<int>(K.size());
  if (k == 0) throw std::invalid_argument("plan: empty K");
  if (goal < 0 || goal >= counts.num_states) {
    throw std::invalid_argument("plan: goal out of range");
  }
  // Meta model over [K..., x, goal]: x aggregates every state outside
  // K ∪ {goal}; leaving K forces one reset step back to the start.
  const int xs = k;
  const int gs = k + 1;
  const int M = k + 2;
  std::vector<int> meta_index(counts.num_states, xs);
  for (int i = 0; i < k; ++i) {
    const int s = K[i];
    if (s < 0 || s >= counts.num_states) {
      throw std::invalid_argument("plan: K state out of range");
    }
    if (s == goal) throw std::invalid_argument("plan: goal already in K");
    meta_index[s] = i;
  }
  meta_index[goal] = gs;
  const int start_slot = [&] {
    const auto it = std::find(K.begin(), K.end(), start_state);
    if (it == K.end()) throw std::invalid_argument("plan: start not in K");
    return static_cast<int>(it - K.begin());
  }();

  const int A = counts.num_actions;
  const int H = ucb_horizon(cfg.params);
  const int B = ucb_plan_window(cfg);

  // Empirical meta rows; a never-sampled pair keeps its mass on x, and its
  // bonus term alone saturates the optimistic recursions.
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(k) * A,
                                        std::vector<double>(M, 0.0));
  std::vector<double> n_eff(static_cast<std::size_t>(k) * A, 0.0);
  for (int i = 0; i < k; ++i) {
    for (int a = 0; a < A; ++a) {
      std::vector<double>& row = rows[static_cast<std::size_t>(i) * A + a];
      double mass = 0.0;
      for (int s2 = 0; s2 < counts.num_states; ++s2) {
        const double p = counts.p_hat(K[i], a, s2);
        row[meta_index[s2]] += p;
        mass += p;
      }
      row[xs] += std::clamp(1.0 - mass, 0.0, 1.0);
      const double n = static_cast<double>(counts.count(K[i], a));
      n_eff[static_cast<std::size_t>(i) * A + a] =
          cfg.bucketed_counts ? n / H : n;
    }
  }

  FiniteHorizonPlan plan;

  // Pass 1 (action selection): maximize the optimistic probability of
  // reaching the goal within the B-step window (a [0,1]-valued recursion, so
  // the Bernstein range is 1). Terminal reward 1 at the goal; the aggregate
  // x costs its reset step. Ties prefer the action whose empirical mass
  // stays inside K ∪ {goal} (an equal-value excursion through x is a
  // pointless reset detour), then the lowest action index.
  std::vector<std::vector<int>> window_actions(
      B, std::vector<int>(k, 0));
  std::vector<double> next_r(M, 0.0);
  next_r[gs] = 1.0;
  for (int h = B - 1; h >= 0; --h) {
    std::vector<double> cur_r(M, 0.0);
    cur_r[gs] = 1.0;
    cur_r[xs] = next_r[start_slot];
    for (int i = 0; i < k; ++i) {
      double best_v = -1.0;
      double best_stay = -1.0;
      int best_a = 0;
      for (int a = 0; a < A; ++a) {
        const std::size_t idx = static_cast<std::size_t>(i) * A + a;
        const Moments m = row_moments(rows[idx], next_r);
        const double v = clip01(m.mu + stage_bonus(m, n_eff[idx], 1.0, cfg));
        const double stay = 1.0 - rows[idx][xs];
        if (v > best_v + 1e-12 ||
            (v > best_v - 1e-12 && stay > best_stay + 1e-12)) {
          best_v = v;
          best_stay = stay;
          best_a = a;
        }
      }
      cur_r[i] = best_v;
      window_actions[h][i] = best_a;
    }
    next_r = std::move(cur_r);
  }
  plan.opt_window_reward = next_r[start_slot];

  // Bonus-free replay of the window recursion: the success probability the
  // empirical model alone supports. Optimism clips every plausible route to
  // reward 1, so saturated candidates are indistinguishable by the
  // optimistic value; this one ranks them by what is already known.
  {
    std::vector<double> emp(M, 0.0);
    emp[gs] = 1.0;
    for (int h = B - 1; h >= 0; --h) {
      std::vector<double> cur(M, 0.0);
      cur[gs] = 1.0;
      cur[xs] = emp[start_slot];
      for (int i = 0; i < k; ++i) {
        double best_v = 0.0;
        for (int a = 0; a < A; ++a) {
          const std::size_t idx = static_cast<std::size_t>(i) * A + a;
          best_v = std::max(best_v, row_moments(rows[idx], emp).mu);
        }
        cur[i] = clip01(best_v);
      }
      emp = std::move(cur);
    }
    plan.emp_window_reward = emp[start_slot];
  }

  // Stationary tail policy for the stages past the window: greedy actions of
  // the empirical expected-steps-to-goal fixpoint with restart accounting,
  // capped at 2H. The window's own terminal stage cannot be replayed:
  // whenever no action reaches the goal in one step, its choice there is
  // ranked by exploration bonus alone, and repeating that noise for the rest
  // of the horizon can trap the plan (e.g. on the reset action). The tail is
  // the fallback after the optimistic window has already failed, so it
  // exploits the current model without bonuses (a bonus-subtracted cost
  // would make a barely-sampled self-loop look free). Ties prefer staying
  // inside K ∪ {goal}, then the lowest action index.
  std::vector<int> tail_actions(k, 0);
  {
    const double cap = 2.0 * H;
    std::vector<double> val(M, 0.0);
    for (int sweep = 0; sweep < 8 * H; ++sweep) {
      std::vector<double> nxt(M, 0.0);
      nxt[xs] = std::min(cap, 1.0 + val[start_slot]);
      double diff = std::abs(nxt[xs] - val[xs]);
      for (int i = 0; i < k; ++i) {
        double best_q = kInf;
        double best_stay = -1.0;
        int best_a = 0;
        for (int a = 0; a < A; ++a) {
          const std::size_t idx = static_cast<std::size_t>(i) * A + a;
          const Moments m = row_moments(rows[idx], val);
          const double q = std::min(cap, 1.0 + m.mu);
          const double stay = 1.0 - rows[idx][xs];
          if (q < best_q - 1e-12 ||
              (q < best_q + 1e-12 && stay > best_stay + 1e-12)) {
            best_q = q;
            best_stay = stay;
            best_a = a;
          }
        }
        nxt[i] = best_q;
        tail_actions[i] = best_a;
        diff = std::max(diff, std::abs(nxt[i] - val[i]));
      }
      val = std::move(nxt);
      if (diff < 1e-9) break;
    }
  }

  // The executed plan follows the window pattern while a full window is
  // still ahead and the stationary tail afterwards.
  plan.stage_actions.resize(H);
  for (int h = 0; h < H; ++h) {
    plan.stage_actions[h] = h < B - 1 ? window_actions[h] : tail_actions;
  }

  // Pass 2 and 3 (pool statistics of the chosen actions): an optimistic
  // lower bound on E[min(tau, H)] (range H - h) and an optimistic upper
  // bound on P(tau <= H) (a probability, range 1), both over the full
  // horizon.
  std::vector<double> next_v(M, 0.0);
  std::vector<double> next_s(M, 0.0);
  next_s[gs] = 1.0;
  for (int h = H - 1; h >= 0; --h) {
    std::vector<double> cur_v(M, 0.0);
    std::vector<double> cur_s(M, 0.0);
    cur_s[gs] = 1.0;
    cur_v[xs] = 1.0 + next_v[start_slot];
    cur_s[xs] = next_s[start_slot];
    const double range = static_cast<double>(H - h);
    for (int i = 0; i < k; ++i) {
      const int a = plan.stage_actions[h][i];
      const std::size_t idx = static_cast<std::size_t>(i) * A + a;
      const Moments mv = row_moments(rows[idx], next_v);
      cur_v[i] = std::max(
          0.0, 1.0 + mv.mu - stage_bonus(mv, n_eff[idx], range, cfg));
      const Moments ms = row_moments(rows[idx], next_s);
      cur_s[i] = clip01(ms.mu + stage_bonus(ms, n_eff[idx], 1.0, cfg));
    }
    next_v = std::move(cur_v);
    next_s = std::move(cur_s);
  }
  plan.opt_truncated_value = next_v[start_slot];
  plan.opt_failure_prob = clip01(1.0 - next_s[start_slot]);
  const double q = plan.opt_failure_prob;
  plan.opt_resetting_value =
      q < 1.0 ? (plan.opt_truncated_value + q) / (1.0 - q) : kInf;
  return plan;
}

RoundOutcome evaluate_round(EnvRunner& runner,
                            const std::vector<DeterministicPolicy>& stage_pi,
                            int goal, std::int64_t episodes,
                            const UcbConfig& cfg) {
  if (stage_pi.empty()) throw std::invalid_argument("round: empty plan");
  if (episodes < 1) throw std::invalid_argument("round: no episodes");
  const int H = static_cast<int>(stage_pi.size());
  const int start = runner.env().start_state;
  const int reset = runner.env().reset_action;
  const double threshold =
      cfg.params.L + cfg.success_slack * cfg.params.epsilon;

  std::int64_t used = 0;
  std::int64_t fails = 0;
  double v_sum = 0.0;
  bool aborted = false;
  for (std::int64_t ep = 0; ep < episodes; ++ep) {
    if (runner.current() != start) runner.step(reset);
    int tau = -1;
    if (runner.current() == goal) {
      tau = 0;
    } else {
      for (int h = 0; h < H; ++h) {
        if (runner.step(stage_pi[h][runner.current()]) == goal) {
          tau = h + 1;
          break;
        }
      }
    }
    ++used;
    if (tau < 0) {
      ++fails;
      v_sum += H;
    } else {
      v_sum += tau;
    }
    if (cfg.abort_hopeless && used < episodes) {
      // Even if every remaining episode reached the goal in one step the
      // round would end with at least these statistics; stop once they
      // already fail the test.
      const double q_best = static_cast<double>(fails) / episodes;
      const double v_best =
          (v_sum + static_cast<double>(episodes - used)) / episodes;
      if (q_best >= 1.0 ||
          (v_best + q_best) / (1.0 - q_best) > threshold + 1e-9) {
        aborted = true;
        break;
      }
    }
  }

  RoundOutcome out;
  out.episodes = used;
  out.q_hat = static_cast<double>(fails) / used;
  out.v_hat = v_sum / used;
  out.resetting = out.q_hat < 1.0
                      ? (out.v_hat + out.q_hat) / (1.0 - out.q_hat)
                      : kInf;
  out.success = !aborted && used == episodes && out.q_hat < 1.0 &&
                out.resetting <= threshold + 1e-9;
  return out;
}

ExplorationResult ucb_run(const TabularMdp& env, const UcbConfig& cfg,
                          std::uint64_t seed,
                          const std::vector<int>* target_set) {
  const AlgoParams params = cfg.params.normalized();
  params.validate();
  env.validate();
  UcbConfig run_cfg = cfg;
  run_cfg.params = params;
  const int S = env.num_states;
  const int A = env.num_actions;
  const int H = ucb_horizon(params);
  const std::int64_t discovery =
      cfg.discovery_target > 0
          ? cfg.discovery_target
          : ceil_to_count(params.L * params.L * params.L /
                          (params.epsilon * params.epsilon));

  EnvRunner runner(env, seed, target_set, cfg.curve_stride, cfg.step_cap);
  ExplorationResult out;
  out.reset_action = env.reset_action;
  out.K.push_back(env.start_state);
  std::vector<char> in_k(S, 0);
  in_k[env.start_state] = 1;
  // Accepted stage plans per K entry; the start is reached by resetting.
  std::vector<std::vector<DeterministicPolicy>> nav;
  nav.emplace_back(H, DeterministicPolicy(S, env.reset_action));
  std::vector<std::int64_t> failed_rounds(S, 0);

  StopReason stop = StopReason::kStop1;
  while (true) {
    // -- State discovery: keep every known pair at the per-pair sample
    // floor, navigating to the pair's state with its accepted stage plan.
    for (int i = 0; i < static_cast<int>(out.K.size()); ++i) {
      const int s = out.K[i];
      const std::vector<DeterministicPolicy>& plan = nav[i];
      for (int a = 0; a < A; ++a) {
        int h = 0;
        while (runner.counts().count(s, a) < discovery) {
          if (runner.current() == s) {
            runner.step(a);
            h = 0;
          } else if (h >= static_cast<int>(plan.size())) {
            runner.step(env.reset_action);
            h = 0;
          } else {
            runner.step(plan[h][runner.current()]);
            ++h;
          }
        }
      }
    }

    // -- Candidate pool: every observed outside state whose optimistic
    // resetting value still fits the budget.
    std::vector<int> U;
    for (int z : runner.discovery_order()) {
      if (!in_k[z]) U.push_back(z);
    }
    struct Candidate {
      int goal = -1;
      FiniteHorizonPlan plan;
    };
    std::vector<Candidate> pool;
    const double pool_threshold =
        params.L + cfg.candidate_slack * params.epsilon + 1e-9;
    for (int u : U) {
      FiniteHorizonPlan plan = finite_horizon_plan(
          runner.counts(), out.K, u, run_cfg, env.reset_action,
          env.start_state);
      if (plan.opt_resetting_value <= pool_threshold) {
        pool.push_back({u, std::move(plan)});
      }
    }
    out.rounds.push_back({runner.steps(), static_cast<int>(out.K.size()),
                          static_cast<int>(pool.size())});
    if (pool.empty()) {
      if (U.empty()) {
        stop = StopReason::kStop1;
        out.events.push_back({runner.steps(), "stop: no candidates left"});
      } else {
        stop = StopReason::kStop2;
        out.events.push_back(
            {runner.steps(), "stop: all candidates above budget"});
      }
      break;
    }

    // -- Selection: largest optimistic windowed reward; ties prefer the
    // larger bonus-free reward (the candidate the current model already
    // supports), then fewer failed rounds, then earlier discovery (pool
    // order).
    int best = 0;
    for (int c = 1; c < static_cast<int>(pool.size()); ++c) {
      const double dv = pool[c].plan.opt_window_reward -
                        pool[best].plan.opt_window_reward;
      const double de = pool[c].plan.emp_window_reward -
                        pool[best].plan.emp_window_reward;
      if (dv > 1e-12 ||
          (dv > -1e-12 &&
           (de > 1e-12 ||
            (de > -1e-12 && failed_rounds[pool[c].goal] <
                                failed_rounds[pool[best].goal])))) {
        best = c;
      }
    }
    const int goal = pool[best].goal;
    const std::vector<DeterministicPolicy> stage_pi =
        pool[best].plan.expand(out.K, S, A, env.reset_action);
    const std::int64_t lam =
        ucb_episode_budget(run_cfg, static_cast<int>(out.K.size()));
    const RoundOutcome res =
        evaluate_round(runner, stage_pi, goal, lam, run_cfg);
    if (res.success) {
      out.K.push_back(goal);
      in_k[goal] = 1;
      nav.push_back(stage_pi);
      int k_in_target = 0;
      for (int s : out.K) k_in_target += runner.target_member(s) ? 1 : 0;
      runner.set_k_size(static_cast<int>(out.K.size()), k_in_target);
      out.events.push_back(
          {runner.steps(), "transfer state " + std::to_string(goal) +
                               " (v=" + std::to_string(res.resetting) + ")"});
    } else {
      ++failed_rounds[goal];
      out.events.push_back(
          {runner.steps(), "failed round for state " + std::to_string(goal) +
                               " (episodes=" + std::to_string(res.episodes) +
                               ")"});
    }
  }

  out.stop = stop;
  out.counts = runner.take_counts();
  out.total_steps = out.counts.total_steps;
  out.curve = runner.take_curve();
  out.policies = std::move(nav);
  return out;
}

}  // namespace autoexplore
