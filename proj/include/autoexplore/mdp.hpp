#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "autoexplore/rng.hpp"

namespace autoexplore {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Dense tabular MDP with a designated reset action that returns the agent
// to the start state deterministically from everywhere.
//
// Transition rows are stored flattened as p[(s*A + a)*S + s'].
struct TabularMdp {
  int num_states = 0;
  int num_actions = 0;  // includes the reset action
  int start_state = 0;
  int reset_action = 0;
  std::vector<double> p;

  double prob(int s, int a, int s2) const {
    return p[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  double& prob_ref(int s, int a, int s2) {
    return p[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
  }
  const double* row(int s, int a) const {
    return p.data() + (static_cast<std::size_t>(s) * num_actions + a) * num_states;
  }

  // Throws std::invalid_argument if shapes are inconsistent, any row does not
  // sum to 1 within 1e-12, or the reset rows are not exactly point masses on
  // the start state.
  void validate() const;

  // Inverse-CDF sample of the next state, scanning the row in state-index
  // order; u must be in [0, 1).
  int sample_next(int s, int a, double u) const;
  int sample_next(int s, int a, SplitMix64& rng) const {
    return sample_next(s, a, rng.next_double());
  }
};

// One action per state.
using DeterministicPolicy = std::vector<int>;

// Common parameters of the exploration algorithms.
struct AlgoParams {
  enum class Mode { kTheoretical, kPractical };

  double L = 1.0;        // target controllability radius, >= 1
  double epsilon = 0.1;  // accuracy; clamped to (0, 1] on entry
  double delta = 0.1;    // confidence, in (0, 1)
  Mode mode = Mode::kPractical;

  // Throws std::invalid_argument on L < 1, epsilon <= 0, delta outside (0,1).
  void validate() const;
  // Returns a copy with epsilon = min(epsilon, 1).
  AlgoParams normalized() const;
};

// Parse error carrying the offending file and line.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text codec:
//   mdp <S> <A> <s0> <reset_action>
//   t <s> <a> <s'> <prob>      (omitted entries are zero)
//   # comment lines and blank lines are ignored
// Rejects rows whose sum deviates from 1 by more than 1e-9 (reported with the
// line number of the last entry of the offending row, or of the header when
// the row has no entries).
TabularMdp parse_mdp_text(std::istream& in, const std::string& origin);
TabularMdp parse_mdp_file(const std::string& path);
// Writes with 17 significant digits so that parse(write(m)) == m exactly.
void write_mdp_file(const TabularMdp& m, const std::string& path);
std::string format_mdp(const TabularMdp& m);

}  // namespace autoexplore
