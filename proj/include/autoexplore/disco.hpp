#pragma once

#include <cstdint>
#include <vector>

#include "autoexplore/exploration.hpp"
#include "autoexplore/optimistic.hpp"

namespace autoexplore {

struct DiscoConfig {
  AlgoParams params;
  // Practical mode only: per-pair allocation targets (default) or a single
  // target from the max over pairs, as in the more conservative benchmark
  // configuration. Theoretical mode always uses the single max-based target.
  bool per_pair_allocation = true;
  std::int64_t step_cap = 1'000'000'000;
  int curve_stride = 100;
};

// Sample requirement for pair (s,a) given the current controllable set K and
// current counts.
//  - practical mode:  ceil( L^4 Θ̂ / eps^2 + L^2 (|K|+2) / eps ), floored at
//    ceil(L) (|K|+2 counts the goal and the aggregate outside state of the
//    planning instance), with
//    Θ̂ = (sum_{s' in K} sqrt(p̂(s'|s,a)(1-p̂(s'|s,a))))^2
//    evaluated per pair or maxed over all pairs of K x A;
//  - theoretical mode: the explicit constant-bearing requirement with
//    gamma = 2 eps / (12 (L+1+eps)(L+eps/3)) and the max-based dispersion
//    term X, floored at ceil(L * ln(3 A L S / delta)).
std::int64_t allocation_target(const CountsTable& counts,
                               const std::vector<int>& K, int s, int a,
                               const DiscoConfig& cfg);

// Candidate restriction: states of U whose empirical reach probability from
// some pair of K x A is at least (1 - eps/2) / L.
std::vector<int> restrict_candidates(const CountsTable& counts,
                                     const std::vector<int>& K,
                                     const std::vector<int>& U,
                                     const AlgoParams& params);

// Runs the incremental discovery algorithm: rounds of (1) sample collection
// up to the allocation target on every pair of K x A, (2) candidate
// restriction, (3) optimistic shortest-path planning over the candidates,
// (4) transfer of the best candidate, until no candidate is left (STOP1) or
// none is optimistically reachable within L (STOP2); then consolidates the
// goal-conditioned policies for every state of K on the final counts.
// target_set (optional) is only used to annotate the discovery curve.
ExplorationResult disco_run(const TabularMdp& env, const DiscoConfig& cfg,
                            std::uint64_t seed,
                            const std::vector<int>* target_set = nullptr);

// Cost-sensitive planning reuse: computes a goal-conditioned policy on the
// final counts of a finished run for an arbitrary cost function
// env_costs[s*A + a] in (0, 1], without further environment interaction.
// Throws std::invalid_argument if goal is not in result.K or any cost is
// not positive.
struct ZeroShotPlan {
  DeterministicPolicy policy;  // reset outside K
  double value_start = 0.0;    // optimistic cost-to-go from the start
};
ZeroShotPlan zero_shot_plan(const ExplorationResult& result, int goal,
                            const std::vector<double>& env_costs,
                            const AlgoParams& params, double gamma_vi);

}  // namespace autoexplore
