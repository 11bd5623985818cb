#include "autoexplore/optimistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace autoexplore {

int OptimisticInstance::index_of(int real_state) const {
  for (int i = 0; i < static_cast<int>(k_states.size()); ++i) {
    if (k_states[i] == real_state) return i;
  }
  return -1;
}

namespace {

double destination_bonus(const CountsTable& counts, int s, int a, int y,
                         const AlgoParams& params) {
  return params.mode == AlgoParams::Mode::kTheoretical
             ? bernstein_bonus(counts, s, a, y, params.delta)
             : practical_bonus(counts, s, a, y);
}

OptimisticInstance build_instance(const CountsTable& counts,
                                  const std::vector<int>& K, int goal_state,
                                  const AlgoParams& params, int start_state,
                                  const std::vector<double>* env_costs,
                                  double x_cost) {
  const int nk = static_cast<int>(K.size());
  if (nk == 0) throw std::invalid_argument("optimistic: empty K");
  for (int s : K) {
    if (s == goal_state) throw std::invalid_argument("optimistic: goal in K");
  }

  OptimisticInstance inst;
  inst.k_states = K;
  inst.goal_state = goal_state;
  inst.x_index = nk;
  inst.goal_index = nk + 1;

  const int start_index = inst.index_of(start_state);
  if (start_index < 0) {
    throw std::invalid_argument("optimistic: start state not in K");
  }

  const int A = counts.num_actions;
  SspBuilder b(nk + 2, inst.goal_index);
  std::vector<double> row(nk + 2, 0.0);
  for (int i = 0; i < nk; ++i) {
    const int s = K[i];
    for (int a = 0; a < A; ++a) {
      std::fill(row.begin(), row.end(), 0.0);
      // Shrink the empirical mass on K and (aggregated) on x by the bonus;
      // everything removed is granted to the goal.
      double inside = 0.0;   // empirical mass on K u {goal}
      double beta_x = 0.0;   // aggregate-destination bonus
      double sum = 0.0;
      for (int j = 0; j < nk; ++j) {
        const double ph = counts.p_hat(s, a, K[j]);
        inside += ph;
        const double bonus = destination_bonus(counts, s, a, K[j], params);
        beta_x += bonus;
        row[j] = std::max(ph - bonus, 0.0);
        sum += row[j];
      }
      inside += counts.p_hat(s, a, goal_state);
      beta_x += destination_bonus(counts, s, a, goal_state, params);
      row[inst.x_index] = std::max((1.0 - inside) - beta_x, 0.0);
      sum += row[inst.x_index];

      double slack = 1.0 - sum;
      if (slack < 0.0) {  // fp guard: renormalize instead of going negative
        for (double& v : row) v /= sum;
        slack = 0.0;
      }
      row[inst.goal_index] = slack;
      const double c =
          env_costs == nullptr
              ? 1.0
              : (*env_costs)[static_cast<std::size_t>(s) * A + a];
      b.add_slot(i, c, row);
    }
  }
  // Meta-state x: reset only, straight back to the start state. The reset
  // charges its usual cost, so a detour through the outside costs the entry
  // step plus the reset step, exactly as in the full-space restricted MDP.
  std::fill(row.begin(), row.end(), 0.0);
  row[start_index] = 1.0;
  b.add_slot(inst.x_index, x_cost, row);
  // The goal is terminal (no slots needed by the planner).

  inst.ssp = b.build();
  return inst;
}

OviResult run_ovi(const CountsTable& counts, const std::vector<int>& K,
                  int goal_state, const AlgoParams& params, double gamma_vi,
                  int reset_action, int start_state,
                  const std::vector<double>* env_costs) {
  const double x_cost =
      env_costs == nullptr
          ? 1.0
          : (*env_costs)[static_cast<std::size_t>(start_state) *
                             counts.num_actions +
                         reset_action];
  const OptimisticInstance inst = build_instance(counts, K, goal_state, params,
                                                 start_state, env_costs,
                                                 x_cost);
  const VsspResult vi = vi_ssp(inst.ssp, gamma_vi);

  OviResult out;
  out.u = vi.value;
  out.u_start = vi.value[inst.index_of(start_state)];
  out.sweeps = vi.sweeps;
  out.converged = vi.converged;
  out.policy.assign(counts.num_states, reset_action);
  for (int i = 0; i < static_cast<int>(K.size()); ++i) {
    out.policy[K[i]] = vi.policy[i];  // slot index == action index inside K
  }
  return out;
}

}  // namespace

OptimisticInstance build_optimistic_instance(const CountsTable& counts,
                                             const std::vector<int>& K,
                                             int goal_state,
                                             const AlgoParams& params,
                                             int start_state) {
  return build_instance(counts, K, goal_state, params, start_state, nullptr,
                        1.0);
}

OviResult ovi_ssp(const CountsTable& counts, const std::vector<int>& K,
                  int goal_state, const AlgoParams& params, double gamma_vi,
                  int reset_action, int start_state) {
  return run_ovi(counts, K, goal_state, params, gamma_vi, reset_action,
                 start_state, nullptr);
}

OviResult ovi_ssp_cost(const CountsTable& counts, const std::vector<int>& K,
                       int goal_state, const AlgoParams& params,
                       double gamma_vi, int reset_action, int start_state,
                       const std::vector<double>& env_costs) {
  return run_ovi(counts, K, goal_state, params, gamma_vi, reset_action,
                 start_state, &env_costs);
}

}  // namespace autoexplore
