#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "autoexplore/mdp.hpp"

namespace autoexplore {

// Transition counts N(s,a) / N(s,a,s') plus the total number of recorded
// environment steps. Single writer, multiple readers: record_transition is
// the only mutator.
struct CountsTable {
  int num_states = 0;
  int num_actions = 0;
  std::vector<std::int64_t> n_sa;   // [s*A + a]
  std::vector<std::int64_t> n_sas;  // [(s*A + a)*S + s']
  std::int64_t total_steps = 0;

  CountsTable() = default;
  CountsTable(int S, int A)
      : num_states(S),
        num_actions(A),
        n_sa(static_cast<std::size_t>(S) * A, 0),
        n_sas(static_cast<std::size_t>(S) * A * S, 0) {}

  void record_transition(int s, int a, int s2) {
    ++n_sa[static_cast<std::size_t>(s) * num_actions + a];
    ++n_sas[(static_cast<std::size_t>(s) * num_actions + a) * num_states + s2];
    ++total_steps;
  }

  std::int64_t count(int s, int a) const {
    return n_sa[static_cast<std::size_t>(s) * num_actions + a];
  }
  std::int64_t count(int s, int a, int s2) const {
    return n_sas[(static_cast<std::size_t>(s) * num_actions + a) * num_states +
                 s2];
  }
  // Empirical transition probability; 0 whenever N(s,a) == 0.
  double p_hat(int s, int a, int s2) const {
    const std::int64_t n = count(s, a);
    return n == 0 ? 0.0 : static_cast<double>(count(s, a, s2)) / n;
  }

  // Throws std::invalid_argument if sum_{s'} N(s,a,s') != N(s,a) somewhere.
  void validate() const;
};

// Text codec:
//   counts <S> <A>
//   c <s> <a> <s'> <n>
// Comments (#) and blank lines ignored; N(s,a) is derived from the entries.
CountsTable parse_counts_text(std::istream& in, const std::string& origin);
CountsTable parse_counts_file(const std::string& path);
void write_counts_file(const CountsTable& c, const std::string& path);
std::string format_counts(const CountsTable& c);

// Empirical Bernstein transition bonus at confidence delta:
//   2*sqrt( p_hat(1-p_hat)/N+ * ln(2 S A N+ / delta) ) + 6 ln(2 S A N+ / delta) / N+
// with N+ = max(1, N(s,a)) and p_hat = 0 when N == 0. Natural logarithm.
double bernstein_bonus(const CountsTable& c, int s, int a, int s2,
                       double delta);

// Constant-free planning bonus used by the practical mode:
//   sqrt( p_hat(1-p_hat) / N+ ) + 1 / N+.
double practical_bonus(const CountsTable& c, int s, int a, int s2);

}  // namespace autoexplore
