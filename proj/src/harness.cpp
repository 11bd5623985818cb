#include "autoexplore/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace autoexplore {

namespace {

std::string fmt_double(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Smallest l in [1, L] with s incrementally l-controllable, to 1e-3.
double min_controllability_level(const TabularMdp& env, int s, double L) {
  const auto contains = [&](double l) {
    const std::vector<int> set = incrementally_controllable_set(env, l);
    return std::find(set.begin(), set.end(), s) != set.end();
  };
  double lo = 1.0;
  double hi = L;
  if (contains(lo)) return lo;
  if (!contains(hi)) return kInf;
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    if (contains(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

AxFlags ax_from_levels(const OracleInfo& oracle,
                       const std::vector<double>& l_prime,
                       const std::vector<double>& v_goal, double L,
                       double eps) {
  AxFlags f;
  f.ax_l = f.ax_prime = f.ax_star = true;
  for (std::size_t i = 0; i < oracle.s_l_arrow.size(); ++i) {
    const int s = oracle.s_l_arrow[i];
    const double v = v_goal[i];
    if (!(v <= L + 2.0 * eps + 1e-9)) f.ax_l = false;
    if (!(v <= l_prime[i] + eps + 1e-9)) f.ax_prime = false;
    if (!(v <= oracle.v_star[s] + eps + 1e-9)) f.ax_star = false;
  }
  return f;
}

std::vector<double> controllability_levels(const TabularMdp& env,
                                           const OracleInfo& oracle,
                                           double L) {
  std::vector<double> l_prime(oracle.s_l_arrow.size(), kInf);
  for (std::size_t i = 0; i < oracle.s_l_arrow.size(); ++i) {
    l_prime[i] = min_controllability_level(env, oracle.s_l_arrow[i], L);
  }
  return l_prime;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return out;
}

}  // namespace

OracleInfo compute_oracle(const TabularMdp& env, double L) {
  OracleInfo info;
  info.s_l = controllable_set(env, L);
  info.s_l_arrow = incrementally_controllable_set(env, L);
  std::vector<char> mask(env.num_states, 0);
  for (int s : info.s_l_arrow) mask[s] = 1;
  info.v_star.assign(env.num_states, kInf);
  for (int s = 0; s < env.num_states; ++s) {
    info.v_star[s] =
        optimal_shortest_path(env, mask, s).value[env.start_state];
  }
  return info;
}

void resolve_default_tunings(ExperimentSpec& spec) {
  // Benchmark tunings: the stochastic-chain runs use the conservative
  // max-over-pairs allocation, raw evaluation counts and the log-scaled
  // episode budget; every other environment uses the per-pair allocation
  // with stage-bucketed counts and the constant episode budget.
  const bool lock = spec.env_arg == "combination-lock";
  spec.disco.per_pair_allocation = !lock;
  spec.ucb.bucketed_counts = !lock;
  spec.ucb.episode_log_factor = lock;
}

AxFlags verify_ax(const TabularMdp& env, const OracleInfo& oracle,
                  const std::vector<double>& v_goal, double L, double eps) {
  if (v_goal.size() != oracle.s_l_arrow.size()) {
    throw std::invalid_argument("verify_ax: value/goal size mismatch");
  }
  return ax_from_levels(oracle, controllability_levels(env, oracle, L),
                        v_goal, L, eps);
}

Aggregate aggregate(const std::vector<double>& xs) {
  Aggregate agg;
  if (xs.empty()) return agg;
  double sum = 0.0;
  for (double x : xs) sum += x;
  agg.mean = sum / xs.size();
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - agg.mean) * (x - agg.mean);
    const double sd = std::sqrt(sq / (xs.size() - 1));
    agg.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return agg;
}

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  if (spec.algo != "disco" && spec.algo != "ucb") {
    throw std::invalid_argument("unknown algorithm: " + spec.algo);
  }
  if (spec.seeds < 1) throw std::invalid_argument("need at least one seed");
  const TabularMdp env = make_env(spec.env_arg, spec.env_params);
  const AlgoParams params = spec.params.normalized();
  params.validate();

  ExperimentOutput out;
  out.oracle = compute_oracle(env, params.L);
  const std::vector<double> l_prime =
      controllability_levels(env, out.oracle, params.L);
  const std::vector<int>& target = out.oracle.s_l_arrow;

  DiscoConfig disco_cfg = spec.disco;
  disco_cfg.params = params;
  UcbConfig ucb_cfg = spec.ucb;
  ucb_cfg.params = params;

  out.runs.resize(spec.seeds);
  std::atomic<int> next_run{0};
  const auto work = [&] {
    for (int i = next_run.fetch_add(1); i < spec.seeds;
         i = next_run.fetch_add(1)) {
      RunRecord& rec = out.runs[i];
      rec.run_index = i;
      rec.seed = derive_run_seed(spec.base_seed, i);
      rec.v_goal.assign(target.size(), kInf);
      try {
        const ExplorationResult res =
            spec.algo == "disco"
                ? disco_run(env, disco_cfg, rec.seed, &target)
                : ucb_run(env, ucb_cfg, rec.seed, &target);
        rec.sample_complexity = res.total_steps;
        rec.stop = res.stop;
        rec.K = res.K;
        rec.curve = res.curve;
        rec.rounds = res.rounds;
        for (std::size_t g = 0; g < target.size(); ++g) {
          const int idx = res.index_in_K(target[g]);
          if (idx < 0) continue;
          if (spec.algo == "disco") {
            rec.v_goal[g] = evaluate_policy_hitting(env, res.policies[idx][0],
                                                    target[g])
                                .value[env.start_state];
          } else {
            rec.v_goal[g] =
                truncated_value_tail(env, res.policies[idx], target[g])
                    .resetting;
          }
        }
        const AxFlags f =
            ax_from_levels(out.oracle, l_prime, rec.v_goal, params.L,
                           params.epsilon);
        rec.ax_l = f.ax_l;
        rec.ax_prime = f.ax_prime;
        rec.ax_star = f.ax_star;
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure = e.what();
      }
    }
  };

  const int workers = std::clamp(spec.workers, 1, spec.seeds);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return out;
}

void write_runs_csv(const std::string& path, const ExperimentOutput& out) {
  std::ofstream f = open_out(path);
  f << "seed,sample_complexity,stop_reason,ax_l,ax_prime,ax_star";
  for (int s : out.oracle.s_l_arrow) f << ",v_goal_" << s;
  f << "\n";
  for (const RunRecord& r : out.runs) {
    f << r.seed << ',' << r.sample_complexity << ','
      << (r.failed ? "FAILED" : to_string(r.stop)) << ',' << (r.ax_l ? 1 : 0)
      << ',' << (r.ax_prime ? 1 : 0) << ',' << (r.ax_star ? 1 : 0);
    for (double v : r.v_goal) f << ',' << fmt_double(v);
    f << "\n";
  }
}

void write_curve_csv(const std::string& path, const ExperimentOutput& out) {
  std::ofstream f = open_out(path);
  f << "seed,step,fraction_controllable\n";
  const double denom =
      out.oracle.s_l_arrow.empty() ? 1.0 : out.oracle.s_l_arrow.size();
  for (const RunRecord& r : out.runs) {
    for (const CurvePoint& p : r.curve) {
      f << r.seed << ',' << p.step << ','
        << fmt_double(p.k_in_target / denom) << "\n";
    }
  }
}

void write_summary_csv(const std::string& path, const ExperimentOutput& out) {
  std::ofstream f = open_out(path);
  f << "metric,mean,ci95\n";
  std::vector<double> complexity, axl, axp, axs;
  std::vector<std::vector<double>> per_goal(out.oracle.s_l_arrow.size());
  for (const RunRecord& r : out.runs) {
    if (r.failed) continue;
    complexity.push_back(static_cast<double>(r.sample_complexity));
    axl.push_back(r.ax_l ? 1.0 : 0.0);
    axp.push_back(r.ax_prime ? 1.0 : 0.0);
    axs.push_back(r.ax_star ? 1.0 : 0.0);
    for (std::size_t g = 0; g < per_goal.size(); ++g) {
      per_goal[g].push_back(r.v_goal[g]);
    }
  }
  const auto row = [&](const std::string& name, const Aggregate& a) {
    f << name << ',' << fmt_double(a.mean) << ',' << fmt_double(a.ci95)
      << "\n";
  };
  row("sample_complexity", aggregate(complexity));
  row("ax_l", aggregate(axl));
  row("ax_prime", aggregate(axp));
  row("ax_star", aggregate(axs));
  for (std::size_t g = 0; g < per_goal.size(); ++g) {
    row("v_goal_" + std::to_string(out.oracle.s_l_arrow[g]),
        aggregate(per_goal[g]));
  }
}

RunsCsv read_runs_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  RunsCsv csv;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (first) {
      csv.header = std::move(fields);
      first = false;
    } else {
      csv.rows.push_back(std::move(fields));
    }
  }
  return csv;
}

}  // namespace autoexplore
