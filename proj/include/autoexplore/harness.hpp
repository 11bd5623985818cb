#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "autoexplore/disco.hpp"
#include "autoexplore/envs.hpp"
#include "autoexplore/hitting.hpp"
#include "autoexplore/ucb.hpp"

namespace autoexplore {

// Oracle description of an environment at level L.
struct OracleInfo {
  std::vector<int> s_l;        // L-controllable states (ascending)
  std::vector<int> s_l_arrow;  // incrementally L-controllable (ascending)
  // Optimal restricted shortest-path values V*_{S_L->}(start -> s) per state
  // (+inf where unreachable under the restriction).
  std::vector<double> v_star;
};
OracleInfo compute_oracle(const TabularMdp& env, double L);

struct ExperimentSpec {
  std::string env_arg = "confusing-chain";
  std::vector<std::string> env_params;
  std::string algo = "disco";  // "disco" | "ucb"
  AlgoParams params;
  int seeds = 1;
  std::uint64_t base_seed = 0;
  int workers = 1;
  std::string out_dir;
  DiscoConfig disco;  // params field is overwritten from `params`
  UcbConfig ucb;      // likewise
};

// Fills algorithm tunings that were not set explicitly with the published
// per-environment defaults (keyed on the environment name).
void resolve_default_tunings(ExperimentSpec& spec);

struct RunRecord {
  int run_index = 0;
  std::uint64_t seed = 0;  // derived run seed
  std::int64_t sample_complexity = 0;
  StopReason stop = StopReason::kStop1;
  bool ax_l = false;
  bool ax_prime = false;
  bool ax_star = false;
  std::vector<int> K;
  // Exact hitting value of the learned policy for every state of S_L->
  // (+inf when the state was not controlled); aligned with oracle.s_l_arrow.
  std::vector<double> v_goal;
  std::vector<CurvePoint> curve;
  std::vector<RoundStat> rounds;
  bool failed = false;        // run threw (e.g. step cap); recorded, not dropped
  std::string failure;
};

struct ExperimentOutput {
  OracleInfo oracle;
  std::vector<RunRecord> runs;  // ordered by run index
};

// Runs spec.seeds independent runs (seed i derived from base_seed and i),
// evaluates every learned goal policy exactly, and computes the AX flags.
// Bit-reproducible for fixed (env, algo, params, seeds, base_seed) regardless
// of the worker count.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

// AX verification for one run given its exact per-goal values.
struct AxFlags {
  bool ax_l = false;
  bool ax_prime = false;
  bool ax_star = false;
};
// v_goal is aligned with oracle.s_l_arrow. ax_l: every state of S_L-> reached
// within L + 2*eps (the slack the learners' acceptance tests tolerate).
// ax_star: within V*_{S_L->} + eps. ax_prime: within L'(s) + eps where L'(s)
// is the smallest l (bisection over [1, L] to 1e-3) with s incrementally
// l-controllable.
AxFlags verify_ax(const TabularMdp& env, const OracleInfo& oracle,
                  const std::vector<double>& v_goal, double L, double eps);

struct Aggregate {
  double mean = 0.0;
  double ci95 = 0.0;  // 1.96 * sd / sqrt(n)
};
Aggregate aggregate(const std::vector<double>& xs);

// CSV writers. runs.csv:
//   seed,sample_complexity,stop_reason,ax_l,ax_prime,ax_star,v_goal_<i>...
// curve.csv:
//   seed,step,fraction_controllable
// summary.csv:
//   metric,mean,ci95
void write_runs_csv(const std::string& path, const ExperimentOutput& out);
void write_curve_csv(const std::string& path, const ExperimentOutput& out);
void write_summary_csv(const std::string& path, const ExperimentOutput& out);

// Reads a runs.csv back (for `verify`). Returns column names and rows.
struct RunsCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
RunsCsv read_runs_csv(const std::string& path);

}  // namespace autoexplore
