#include "autoexplore/ssp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace autoexplore {

namespace {
constexpr long kSweepCap = 10'000'000;
}

double SspProblem::min_cost() const {
  double c = 1.0;
  for (double x : cost) c = std::min(c, x);
  return c;
}

void SspProblem::validate() const {
  if (num_states <= 0) throw std::invalid_argument("ssp: no states");
  if (goal < 0 || goal >= num_states) {
    throw std::invalid_argument("ssp: goal out of range");
  }
  if (static_cast<int>(slot_offset.size()) != num_states + 1 ||
      slot_offset.front() != 0 ||
      slot_offset.back() != static_cast<int>(cost.size()) ||
      p.size() != cost.size() * static_cast<std::size_t>(num_states)) {
    throw std::invalid_argument("ssp: slot layout mismatch");
  }
  for (int s = 0; s < num_states; ++s) {
    if (slot_offset[s + 1] < slot_offset[s]) {
      throw std::invalid_argument("ssp: negative slot count");
    }
    if (s != goal && slots_of(s) == 0) {
      throw std::invalid_argument("ssp: non-goal state without actions");
    }
  }
  for (int slot = 0; slot < num_slots(); ++slot) {
    if (cost[slot] < 0.0 || cost[slot] > 1.0) {
      throw std::invalid_argument("ssp: cost outside [0,1]");
    }
    const double* r = row(slot);
    double sum = 0.0;
    for (int y = 0; y < num_states; ++y) {
      if (r[y] < 0.0) throw std::invalid_argument("ssp: negative probability");
      sum += r[y];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("ssp: row does not sum to 1");
    }
  }
}

bool SspProblem::has_proper_policy() const {
  // Backward reachability over the union support graph: a proper policy
  // exists iff every state can reach the goal through supported transitions.
  std::vector<char> reach(num_states, 0);
  reach[goal] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < num_states; ++s) {
      if (reach[s]) continue;
      for (int slot = slot_offset[s]; slot < slot_offset[s + 1]; ++slot) {
        const double* r = row(slot);
        for (int y = 0; y < num_states; ++y) {
          if (r[y] > 0.0 && reach[y]) {
            reach[s] = 1;
            changed = true;
            break;
          }
        }
        if (reach[s]) break;
      }
    }
  }
  return std::all_of(reach.begin(), reach.end(),
                     [](char c) { return c != 0; });
}

void SspBuilder::add_slot(int s, double c, const std::vector<double>& r) {
  if (static_cast<int>(r.size()) != num_states) {
    throw std::invalid_argument("ssp builder: row size mismatch");
  }
  costs[s].push_back(c);
  rows[s].insert(rows[s].end(), r.begin(), r.end());
}

SspProblem SspBuilder::build() const {
  SspProblem out;
  out.num_states = num_states;
  out.goal = goal;
  out.slot_offset.assign(1, 0);
  for (int s = 0; s < num_states; ++s) {
    out.slot_offset.push_back(out.slot_offset.back() +
                              static_cast<int>(costs[s].size()));
    out.cost.insert(out.cost.end(), costs[s].begin(), costs[s].end());
    out.p.insert(out.p.end(), rows[s].begin(), rows[s].end());
  }
  return out;
}

VsspResult vi_ssp(const SspProblem& ssp, double gamma_vi) {
  const int n = ssp.num_states;
  VsspResult out;
  out.value.assign(n, 0.0);
  out.policy.assign(n, 0);

  std::vector<double> next(n, 0.0);
  for (long sweep = 1; sweep <= kSweepCap; ++sweep) {
    double diff = 0.0;
    for (int s = 0; s < n; ++s) {
      if (s == ssp.goal) continue;
      double best = kInf;
      for (int slot = ssp.slot_offset[s]; slot < ssp.slot_offset[s + 1];
           ++slot) {
        const double* r = ssp.row(slot);
        double q = ssp.cost[slot];
        for (int y = 0; y < n; ++y) {
          if (r[y] > 0.0 && y != ssp.goal) q += r[y] * out.value[y];
        }
        if (q < best) best = q;
      }
      next[s] = best;
      diff = std::max(diff, std::abs(best - out.value[s]));
    }
    for (int s = 0; s < n; ++s) {
      if (s != ssp.goal) out.value[s] = next[s];
    }
    out.sweeps = static_cast<int>(sweep);
    if (diff <= gamma_vi) {
      out.converged = true;
      break;
    }
  }

  // Greedy policy on the final iterate; ties go to the lowest slot index.
  for (int s = 0; s < n; ++s) {
    if (s == ssp.goal) continue;
    double best = kInf;
    int best_slot = 0;
    for (int slot = ssp.slot_offset[s]; slot < ssp.slot_offset[s + 1];
         ++slot) {
      const double* r = ssp.row(slot);
      double q = ssp.cost[slot];
      for (int y = 0; y < n; ++y) {
        if (r[y] > 0.0 && y != ssp.goal) q += r[y] * out.value[y];
      }
      if (q < best - 1e-12) {
        best = q;
        best_slot = slot - ssp.slot_offset[s];
      }
    }
    out.policy[s] = best_slot;
  }
  return out;
}

std::vector<double> ssp_policy_value(const SspProblem& ssp,
                                     const std::vector<int>& policy) {
  const int n = ssp.num_states;
  // Properness of the chosen slots: backward closure as in the MDP case.
  std::vector<int> slot_of(n, -1);
  for (int s = 0; s < n; ++s) {
    if (s == ssp.goal) continue;
    slot_of[s] = ssp.slot_offset[s] + policy[s];
  }
  std::vector<char> reach(n, 0);
  reach[ssp.goal] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (reach[s]) continue;
      const double* r = ssp.row(slot_of[s]);
      for (int y = 0; y < n; ++y) {
        if (r[y] > 0.0 && reach[y]) {
          reach[s] = 1;
          changed = true;
          break;
        }
      }
    }
  }
  std::vector<char> proper = reach;
  changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!proper[s] || s == ssp.goal) continue;
      const double* r = ssp.row(slot_of[s]);
      for (int y = 0; y < n; ++y) {
        if (r[y] > 0.0 && !proper[y]) {
          proper[s] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<double> value(n, kInf);
  value[ssp.goal] = 0.0;
  std::vector<int> sub, pos(n, -1);
  for (int s = 0; s < n; ++s) {
    if (s != ssp.goal && proper[s]) {
      pos[s] = static_cast<int>(sub.size());
      sub.push_back(s);
    }
  }
  const int k = static_cast<int>(sub.size());
  if (k == 0) return value;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    const int s = sub[i];
    const double* r = ssp.row(slot_of[s]);
    b(i) = ssp.cost[slot_of[s]];
    for (int y = 0; y < n; ++y) {
      if (r[y] > 0.0 && pos[y] >= 0) A(i, pos[y]) -= r[y];
    }
  }
  const Eigen::VectorXd v = A.partialPivLu().solve(b);
  for (int i = 0; i < k; ++i) value[sub[i]] = v(i);
  return value;
}

std::vector<double> ssp_optimal_value(const SspProblem& ssp) {
  VsspResult r = vi_ssp(ssp, 1e-12);
  return r.value;
}

}  // namespace autoexplore
