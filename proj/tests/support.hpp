#pragma once

// Seeded randomized property suites shared by the unit tests and the
// acceptance gate. Every suite is deterministic given its seed and reports
// trial/failure counts so callers can assert or print a summary line.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "autoexplore/counts.hpp"
#include "autoexplore/envs.hpp"
#include "autoexplore/exploration.hpp"
#include "autoexplore/hitting.hpp"
#include "autoexplore/mdp.hpp"
#include "autoexplore/optimistic.hpp"
#include "autoexplore/rng.hpp"
#include "autoexplore/ssp.hpp"

namespace axtest {

using namespace autoexplore;

struct SuiteResult {
  int trials = 0;
  int failures = 0;
  std::string note;  // first failure, for the report
  bool ok() const { return failures == 0; }
  void fail(const std::string& what) {
    if (failures == 0) note = what;
    ++failures;
  }
};

// Random goal-reaching instance: 2..6 states, 1..3 action slots per non-goal
// state, costs in [0.1, 1]. Half the slots get extra mass on the goal so a
// proper policy almost always exists; redraw otherwise.
inline SspProblem random_proper_ssp(SplitMix64& rng) {
  for (;;) {
    const int n = 2 + static_cast<int>(rng.next_below(5));
    const int goal = static_cast<int>(rng.next_below(n));
    SspBuilder b(n, goal);
    for (int s = 0; s < n; ++s) {
      if (s == goal) continue;
      const int slots = 1 + static_cast<int>(rng.next_below(3));
      for (int k = 0; k < slots; ++k) {
        const double cost = 0.1 + 0.9 * rng.next_double();
        std::vector<double> w(n);
        double sum = 0.0;
        for (int y = 0; y < n; ++y) {
          w[y] = rng.next_double();
          sum += w[y];
        }
        if (rng.next_below(2) == 0) {
          w[goal] += 1.0;
          sum += 1.0;
        }
        for (double& x : w) x /= sum;
        b.add_slot(s, cost, w);
      }
    }
    SspProblem ssp = b.build();
    ssp.validate();
    if (ssp.has_proper_policy()) return ssp;
  }
}

// Planner contract on random proper instances: with value iteration stopped
// at precision gamma <= c_min/2, the returned value u and greedy policy pi
// satisfy the sandwich u <= V* <= V^pi and V^pi <= (1 + 2 gamma/c_min) u.
inline SuiteResult planner_contract_suite(std::uint64_t seed,
                                          int trials = 200) {
  SuiteResult res;
  SplitMix64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    ++res.trials;
    const SspProblem ssp = random_proper_ssp(rng);
    const double cmin = ssp.min_cost();
    const double gamma = 1e-6 + (0.5 * cmin - 1e-6) * rng.next_double();
    const VsspResult vi = vi_ssp(ssp, gamma);
    const std::vector<double> vstar = ssp_optimal_value(ssp);
    const std::vector<double> vpi = ssp_policy_value(ssp, vi.policy);
    for (int s = 0; s < ssp.num_states; ++s) {
      if (vi.value[s] <= vstar[s] + 1e-9 && vstar[s] <= vpi[s] + 1e-9 &&
          vpi[s] <= (1.0 + 2.0 * gamma / cmin) * vi.value[s] + 1e-8) {
        continue;
      }
      std::ostringstream os;
      os << "planner contract violated: trial " << t << " state " << s
         << " u=" << vi.value[s] << " V*=" << vstar[s] << " Vpi=" << vpi[s]
         << " gamma=" << gamma << " cmin=" << cmin;
      res.fail(os.str());
      break;
    }
  }
  return res;
}

// Random single-policy MDP for the model-perturbation suite: 3..6 states,
// action 0 carries a random goal-biased row per non-goal state, action 1 is
// the reset. The all-zeros policy is proper (checked; redraw otherwise).
inline TabularMdp random_policy_mdp(SplitMix64& rng, int* goal_out) {
  for (;;) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    const int goal = 1 + static_cast<int>(rng.next_below(n - 1));
    TabularMdp m;
    m.num_states = n;
    m.num_actions = 2;
    m.start_state = 0;
    m.reset_action = 1;
    m.p.assign(static_cast<std::size_t>(n) * 2 * n, 0.0);
    for (int s = 0; s < n; ++s) {
      m.prob_ref(s, 1, 0) = 1.0;  // reset
      if (s == goal) {
        m.prob_ref(s, 0, s) = 1.0;
        continue;
      }
      std::vector<double> w(n);
      double sum = 0.0;
      for (int y = 0; y < n; ++y) {
        w[y] = rng.next_double();
        sum += w[y];
      }
      w[goal] += 0.5;
      sum += 0.5;
      for (int y = 0; y < n; ++y) m.prob_ref(s, 0, y) = w[y] / sum;
    }
    m.validate();
    const HittingValues v =
        evaluate_policy_hitting(m, DeterministicPolicy(n, 0), goal);
    if (v.all_finite()) {
      *goal_out = goal;
      return m;
    }
  }
}

// Model-perturbation bound: for two kernels whose policy rows differ by at
// most eta in l1 over the non-goal states, with eta * ||V'||_inf <= 2 c_min
// (unit costs here, c_min = 1), the exact policy values satisfy
// ||V - V'||_inf <= 7 eta ||V'||_inf^2 / c_min, plus the two one-sided
// relative bounds it is derived from.
inline SuiteResult perturbation_suite(std::uint64_t seed, int trials = 200) {
  SuiteResult res;
  SplitMix64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    ++res.trials;
    int goal = 0;
    const TabularMdp base = random_policy_mdp(rng, &goal);
    const int n = base.num_states;
    const DeterministicPolicy pi(n, 0);
    const HittingValues v_base = evaluate_policy_hitting(base, pi, goal);
    double b_inf = 0.0;
    for (int s = 0; s < n; ++s) {
      if (s != goal) b_inf = std::max(b_inf, v_base.value[s]);
    }

    // Perturb: per non-goal row, move mass from a supported state to another
    // state, keeping the support (so the policy stays proper) and the total
    // designed l1 budget within 2 c_min / ||V'||_inf.
    const double eta_budget = 2.0 / b_inf * (0.1 + 0.9 * rng.next_double());
    TabularMdp pert = base;
    for (int s = 0; s < n; ++s) {
      if (s == goal) continue;
      const int y_from = static_cast<int>(rng.next_below(n));
      const int y_to = static_cast<int>(rng.next_below(n));
      if (y_from == y_to) continue;
      const double have = pert.prob(s, 0, y_from);
      const double delta =
          std::min(0.5 * eta_budget * rng.next_double(), 0.9 * have);
      pert.prob_ref(s, 0, y_from) = have - delta;
      pert.prob_ref(s, 0, y_to) += delta;
    }
    pert.validate();

    double eta = 0.0;  // realized l1 distance over non-goal destinations
    for (int s = 0; s < n; ++s) {
      if (s == goal) continue;
      double d = 0.0;
      for (int y = 0; y < n; ++y) {
        if (y != goal) d += std::abs(pert.prob(s, 0, y) - base.prob(s, 0, y));
      }
      eta = std::max(eta, d);
    }

    const HittingValues v_pert = evaluate_policy_hitting(pert, pi, goal);
    if (!v_pert.all_finite()) {
      res.fail("perturbed policy lost properness");
      continue;
    }
    bool bad = false;
    for (int s = 0; s < n && !bad; ++s) {
      if (s == goal) continue;
      const double lhs = std::abs(v_pert.value[s] - v_base.value[s]);
      if (lhs > 7.0 * eta * b_inf * b_inf + 1e-8) bad = true;
      if (v_pert.value[s] >
          (1.0 + 2.0 * eta * b_inf) * v_base.value[s] + 1e-8) {
        bad = true;
      }
      if (v_base.value[s] >
          (1.0 + eta * b_inf) * v_pert.value[s] + 1e-8) {
        bad = true;
      }
    }
    if (bad) {
      std::ostringstream os;
      os << "perturbation bound violated: trial " << t << " eta=" << eta
         << " |V'|=" << b_inf;
      res.fail(os.str());
    }
  }
  return res;
}

// Optimism of the planner on sampled counts: on the stochastic chain with
// K = {s3, s4, s5} and goal s2, draw 200 samples per pair from the true
// kernel and check the optimistic value at the start against the exact
// restricted optimum (8/3). The confidence-bound mode guarantees this on at
// least a 1 - delta fraction of trials at delta = 0.1.
inline SuiteResult optimism_suite(std::uint64_t seed, int trials = 200,
                                  int samples_per_pair = 200) {
  SuiteResult res;
  const TabularMdp env = make_combination_lock();
  const std::vector<int> K = {3, 4, 5};
  const int goal = 2;
  std::vector<char> mask(env.num_states, 0);
  for (int s : K) mask[s] = 1;
  const double vstar =
      optimal_shortest_path(env, mask, goal).value[env.start_state];

  AlgoParams params;
  params.L = 3.0;
  params.epsilon = 0.1;
  params.delta = 0.1;
  params.mode = AlgoParams::Mode::kTheoretical;

  for (int t = 0; t < trials; ++t) {
    ++res.trials;
    SplitMix64 rng(SplitMix64::mix(seed + SplitMix64::kGamma * (t + 1)));
    CountsTable counts(env.num_states, env.num_actions);
    for (int s : K) {
      for (int a = 0; a < env.num_actions; ++a) {
        for (int i = 0; i < samples_per_pair; ++i) {
          counts.record_transition(s, a, env.sample_next(s, a, rng));
        }
      }
    }
    const OviResult ovi = ovi_ssp(counts, K, goal, params, 1e-6,
                                  env.reset_action, env.start_state);
    if (ovi.u_start > vstar + 1e-9) {
      std::ostringstream os;
      os << "optimism missed: trial " << t << " u=" << ovi.u_start
         << " V*=" << vstar;
      res.fail(os.str());
    }
  }
  return res;
}

struct ResettingCheck {
  double exact = 0.0;      // (v_H + q_H) / (1 - q_H) from the recurrence
  double mc_mean = 0.0;    // Monte Carlo mean journey length
  double mc_se = 0.0;      // standard error of the mean
  bool ok = false;         // |exact - mc| <= 3 se
};

// Resetting identity: a policy truncated after H steps and restarted by a
// unit-cost reset has expected journey length (v_H + q_H)/(1 - q_H). The
// Monte Carlo side simulates full journeys on the confusing chain with the
// skip route to the chain end (real truncation mass at H = 6).
inline ResettingCheck resetting_identity_check(std::uint64_t seed,
                                               std::int64_t journeys) {
  const TabularMdp env = make_confusing_chain();
  const int goal = 5;
  const int H = 6;
  DeterministicPolicy pi(env.num_states, 0);
  pi[1] = 1;  // skip attempt at s1; the rest of the route walks

  ResettingCheck out;
  out.exact = truncated_value_tail(env, pi, goal, H).resetting;

  SplitMix64 rng(seed);
  double sum = 0.0;
  double sumsq = 0.0;
  for (std::int64_t j = 0; j < journeys; ++j) {
    std::int64_t steps = 0;
    int s = env.start_state;
    for (;;) {
      int in_attempt = 0;
      while (s != goal && in_attempt < H) {
        s = env.sample_next(s, pi[s], rng);
        ++steps;
        ++in_attempt;
      }
      if (s == goal) break;
      s = env.sample_next(s, env.reset_action, rng);
      ++steps;
    }
    sum += static_cast<double>(steps);
    sumsq += static_cast<double>(steps) * static_cast<double>(steps);
  }
  const double n = static_cast<double>(journeys);
  out.mc_mean = sum / n;
  const double var = (sumsq - n * out.mc_mean * out.mc_mean) / (n - 1.0);
  out.mc_se = std::sqrt(std::max(var, 0.0) / n);
  out.ok = std::abs(out.exact - out.mc_mean) <= 3.0 * out.mc_se + 1e-12;
  return out;
}

// Candidate bound: every recorded round must keep its candidate-set size
// within 2 L A |K|.
inline bool rounds_within_candidate_bound(const std::vector<RoundStat>& rounds,
                                          double L, int num_actions) {
  for (const RoundStat& r : rounds) {
    if (r.w_size > 2.0 * L * num_actions * r.k_size + 1e-9) return false;
  }
  return true;
}

// Terminal-set envelope: inner <= K <= outer as sets.
inline bool k_within_envelope(std::vector<int> K,
                              const std::vector<int>& inner,
                              const std::vector<int>& outer) {
  std::sort(K.begin(), K.end());
  return std::includes(K.begin(), K.end(), inner.begin(), inner.end()) &&
         std::includes(outer.begin(), outer.end(), K.begin(), K.end());
}

}  // namespace axtest
