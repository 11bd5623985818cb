#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "autoexplore/counts.hpp"
#include "autoexplore/mdp.hpp"
#include "autoexplore/rng.hpp"

namespace autoexplore {

enum class StopReason {
  kStop1,  // no candidate states left to consider
  kStop2,  // candidates remain but none is reachable within the budget L
};

inline const char* to_string(StopReason r) {
  return r == StopReason::kStop1 ? "STOP1" : "STOP2";
}

struct CurvePoint {
  std::int64_t step = 0;
  int k_size = 0;       // |K|
  int k_in_target = 0;  // |K ∩ target_set| (0 if no target set was supplied)
};

struct ExplorationEvent {
  std::int64_t step = 0;
  std::string what;
};

// Snapshot taken once per round, after the candidate set is formed.
struct RoundStat {
  std::int64_t step = 0;
  int k_size = 0;  // |K| during the round
  int w_size = 0;  // number of candidate goals considered
};

// Common output of the exploration algorithms.
struct ExplorationResult {
  std::vector<int> K;  // discovery order, K[0] == start state
  // Goal-conditioned policies aligned with K. One stage for stationary
  // policies (the shortest-path learner); H stages for the finite-horizon
  // learner. policies[i][h][s] is the action taken at s in stage h.
  std::vector<std::vector<DeterministicPolicy>> policies;
  CountsTable counts;
  int reset_action = -1;  // copied from the environment, for later planning
  std::int64_t total_steps = 0;
  StopReason stop = StopReason::kStop1;
  std::vector<CurvePoint> curve;
  std::vector<RoundStat> rounds;
  std::vector<ExplorationEvent> events;  // append-only log

  int index_in_K(int s) const {
    auto it = std::find(K.begin(), K.end(), s);
    return it == K.end() ? -1 : static_cast<int>(it - K.begin());
  }
  bool in_K(int s) const { return index_in_K(s) >= 0; }
};

// Simulation driver shared by the exploration algorithms: owns the stream of
// randomness, the transition counts, the first-observation bookkeeping and
// the discovery-curve sampling. Every environment interaction goes through
// step().
class EnvRunner {
 public:
  EnvRunner(const TabularMdp& env, std::uint64_t seed,
            const std::vector<int>* target_set, int curve_stride,
            std::int64_t step_cap)
      : env_(&env),
        rng_(seed),
        counts_(env.num_states, env.num_actions),
        current_(env.start_state),
        step_cap_(step_cap),
        curve_stride_(curve_stride),
        in_target_(env.num_states, 0),
        discovered_(env.num_states, 0) {
    if (target_set != nullptr) {
      for (int s : *target_set) in_target_[s] = 1;
    }
    k_in_target_ = in_target_[env.start_state] ? 1 : 0;
    note_state(env.start_state);
    curve_.push_back({0, 1, k_in_target_});
  }

  // Executes `action` in the current state: samples, records the transition,
  // advances the curve clock. Returns the next state. Throws
  // std::runtime_error when the step cap is exceeded.
  int step(int action) {
    if (counts_.total_steps >= step_cap_) {
      throw std::runtime_error("exploration step cap exceeded");
    }
    const int next = env_->sample_next(current_, action, rng_);
    counts_.record_transition(current_, action, next);
    if (!discovered_[next]) note_state(next);
    if (counts_.total_steps % curve_stride_ == 0) {
      curve_.push_back({counts_.total_steps, k_size_, k_in_target_});
    }
    current_ = next;
    return next;
  }

  int current() const { return current_; }
  std::int64_t steps() const { return counts_.total_steps; }
  const CountsTable& counts() const { return counts_; }
  const TabularMdp& env() const { return *env_; }
  bool target_member(int s) const { return in_target_[s] != 0; }

  // States in first-observation order (the start state is entry 0).
  const std::vector<int>& discovery_order() const { return discovery_order_; }
  bool discovered(int s) const { return discovered_[s] != 0; }

  // Curve bookkeeping: the algorithm reports the size of K after transfers.
  void set_k_size(int k_size, int k_in_target) {
    k_size_ = k_size;
    k_in_target_ = k_in_target;
  }

  std::vector<CurvePoint> take_curve() { return std::move(curve_); }
  CountsTable take_counts() { return std::move(counts_); }

 private:
  void note_state(int s) {
    discovered_[s] = 1;
    discovery_order_.push_back(s);
  }

  const TabularMdp* env_;
  SplitMix64 rng_;
  CountsTable counts_;
  int current_;
  std::int64_t step_cap_;
  int curve_stride_;
  int k_size_ = 1;
  int k_in_target_ = 0;
  std::vector<char> in_target_;
  std::vector<char> discovered_;
  std::vector<int> discovery_order_;
  std::vector<CurvePoint> curve_;
};

}  // namespace autoexplore
