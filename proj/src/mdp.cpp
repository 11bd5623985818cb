#include "autoexplore/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace autoexplore {

void TabularMdp::validate() const {
  if (num_states <= 0 || num_actions <= 0) {
    throw std::invalid_argument("mdp: state and action counts must be positive");
  }
  if (start_state < 0 || start_state >= num_states) {
    throw std::invalid_argument("mdp: start state out of range");
  }
  if (reset_action < 0 || reset_action >= num_actions) {
    throw std::invalid_argument("mdp: reset action out of range");
  }
  const std::size_t expected =
      static_cast<std::size_t>(num_states) * num_actions * num_states;
  if (p.size() != expected) {
    throw std::invalid_argument("mdp: kernel size mismatch");
  }
  for (int s = 0; s < num_states; ++s) {
    for (int a = 0; a < num_actions; ++a) {
      const double* r = row(s, a);
      double sum = 0.0;
      for (int y = 0; y < num_states; ++y) {
        if (r[y] < 0.0 || r[y] > 1.0) {
          throw std::invalid_argument(
              "mdp: probability out of [0,1] at state " + std::to_string(s) +
              " action " + std::to_string(a));
        }
        sum += r[y];
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("mdp: row (" + std::to_string(s) + "," +
                                    std::to_string(a) +
                                    ") sums to " + std::to_string(sum));
      }
    }
    // The reset convention must hold exactly, not merely within tolerance.
    const double* r = row(s, reset_action);
    for (int y = 0; y < num_states; ++y) {
      const double want = (y == start_state) ? 1.0 : 0.0;
      if (r[y] != want) {
        throw std::invalid_argument(
            "mdp: reset action is not a point mass on the start state at "
            "state " + std::to_string(s));
      }
    }
  }
}

int TabularMdp::sample_next(int s, int a, double u) const {
  const double* r = row(s, a);
  double acc = 0.0;
  int last_support = -1;
  for (int y = 0; y < num_states; ++y) {
    if (r[y] > 0.0) last_support = y;
    acc += r[y];
    if (u < acc) return y;
  }
  // Rounding pushed the cumulative sum below u; return the last supported
  // state, matching the inverse-CDF convention.
  return last_support >= 0 ? last_support : num_states - 1;
}

void AlgoParams::validate() const {
  if (!(L >= 1.0)) throw std::invalid_argument("params: L must be >= 1");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("params: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("params: delta must lie in (0,1)");
  }
}

AlgoParams AlgoParams::normalized() const {
  validate();
  AlgoParams out = *this;
  if (out.epsilon > 1.0) out.epsilon = 1.0;
  return out;
}

}  // namespace autoexplore
