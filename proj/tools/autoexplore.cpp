// Command-line front end: seeded experiment runs, exact oracle printing and
// AX re-verification of emitted run tables.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "autoexplore/harness.hpp"

namespace {

using namespace autoexplore;

constexpr int kExitOk = 0;
constexpr int kExitBadSpec = 2;
constexpr int kExitRunFailure = 3;

std::string fmt(double v) {
  if (v == kInf) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void print_oracle(const TabularMdp& env, const OracleInfo& oracle) {
  std::printf("S_L:");
  for (int s : oracle.s_l) std::printf(" %d", s);
  std::printf("\nS_L->:");
  for (int s : oracle.s_l_arrow) std::printf(" %d", s);
  std::printf("\n");
  for (int s = 0; s < env.num_states; ++s) {
    std::printf("V*(start -> %d) = %s\n", s, fmt(oracle.v_star[s]).c_str());
  }
}

int cmd_run(const ExperimentSpec& spec_in) {
  ExperimentSpec spec = spec_in;
  const ExperimentOutput out = run_experiment(spec);
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path dir(spec.out_dir);
    write_runs_csv((dir / "runs.csv").string(), out);
    write_curve_csv((dir / "curve.csv").string(), out);
    write_summary_csv((dir / "summary.csv").string(), out);
  }

  std::vector<double> complexity;
  int failures = 0;
  for (const RunRecord& r : out.runs) {
    if (r.failed) {
      ++failures;
      std::printf("run %d FAILED: %s\n", r.run_index, r.failure.c_str());
    } else {
      complexity.push_back(static_cast<double>(r.sample_complexity));
    }
  }
  const Aggregate agg = aggregate(complexity);
  std::printf("runs: %d (failed: %d)\n", static_cast<int>(out.runs.size()),
              failures);
  std::printf("sample_complexity: %.1f (ci95 %.1f)\n", agg.mean, agg.ci95);
  for (std::size_t g = 0; g < out.oracle.s_l_arrow.size(); ++g) {
    std::vector<double> vs;
    for (const RunRecord& r : out.runs) {
      if (!r.failed) vs.push_back(r.v_goal[g]);
    }
    const Aggregate va = aggregate(vs);
    std::printf("v_goal_%d: %s (ci95 %s)\n", out.oracle.s_l_arrow[g],
                fmt(va.mean).c_str(), fmt(va.ci95).c_str());
  }
  std::vector<double> axl, axp, axs;
  for (const RunRecord& r : out.runs) {
    if (r.failed) continue;
    axl.push_back(r.ax_l ? 1 : 0);
    axp.push_back(r.ax_prime ? 1 : 0);
    axs.push_back(r.ax_star ? 1 : 0);
  }
  std::printf("ax_l/ax_prime/ax_star rates: %s / %s / %s\n",
              fmt(aggregate(axl).mean).c_str(), fmt(aggregate(axp).mean).c_str(),
              fmt(aggregate(axs).mean).c_str());
  if (!spec.out_dir.empty()) {
    std::printf("wrote %s/{runs,curve,summary}.csv\n", spec.out_dir.c_str());
  }
  return failures == 0 ? kExitOk : kExitRunFailure;
}

int cmd_verify(const std::string& runs_path, const TabularMdp& env,
               double L, double eps) {
  const OracleInfo oracle = compute_oracle(env, L);
  const RunsCsv csv = read_runs_csv(runs_path);
  // Map v_goal columns onto the oracle's goal list.
  std::vector<int> col_of_goal(oracle.s_l_arrow.size(), -1);
  int col_axl = -1, col_axp = -1, col_axs = -1;
  for (int c = 0; c < static_cast<int>(csv.header.size()); ++c) {
    const std::string& name = csv.header[c];
    if (name == "ax_l") col_axl = c;
    if (name == "ax_prime") col_axp = c;
    if (name == "ax_star") col_axs = c;
    for (std::size_t g = 0; g < oracle.s_l_arrow.size(); ++g) {
      if (name == "v_goal_" + std::to_string(oracle.s_l_arrow[g])) {
        col_of_goal[g] = c;
      }
    }
  }
  if (col_axl < 0 || col_axp < 0 || col_axs < 0) {
    std::fprintf(stderr, "missing ax columns in %s\n", runs_path.c_str());
    return kExitBadSpec;
  }
  for (int g : col_of_goal) {
    if (g < 0) {
      std::fprintf(stderr, "missing v_goal column for an S_L-> state\n");
      return kExitBadSpec;
    }
  }
  int mismatches = 0;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const std::vector<std::string>& row = csv.rows[r];
    std::vector<double> v_goal(oracle.s_l_arrow.size(), kInf);
    for (std::size_t g = 0; g < v_goal.size(); ++g) {
      const std::string& cell = row[col_of_goal[g]];
      v_goal[g] = cell == "inf" ? kInf : std::stod(cell);
    }
    const AxFlags f = verify_ax(env, oracle, v_goal, L, eps);
    const bool same = (f.ax_l ? "1" : "0") == row[col_axl] &&
                      (f.ax_prime ? "1" : "0") == row[col_axp] &&
                      (f.ax_star ? "1" : "0") == row[col_axs];
    if (!same) {
      ++mismatches;
      std::printf("row %zu: recorded %s/%s/%s recomputed %d/%d/%d\n", r + 1,
                  row[col_axl].c_str(), row[col_axp].c_str(),
                  row[col_axs].c_str(), f.ax_l ? 1 : 0, f.ax_prime ? 1 : 0,
                  f.ax_star ? 1 : 0);
    }
  }
  std::printf("verified %zu rows, %d mismatch(es)\n", csv.rows.size(),
              mismatches);
  return mismatches == 0 ? kExitOk : kExitRunFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Autonomous-exploration experiment runner"};
  app.require_subcommand(1);

  ExperimentSpec spec;
  std::string mode = "practical";
  double oracle_l = 1.0;
  std::string runs_path;

  // Tuning overrides; applied over the per-environment defaults only when
  // given on the command line.
  bool disco_max_alloc = false;
  bool ucb_raw_counts = false;
  bool ucb_bucketed_counts = false;
  bool ucb_log_episodes = false;
  bool ucb_flat_episodes = false;
  bool ucb_full_horizon = false;
  bool ucb_abort_hopeless = false;

  CLI::App* run = app.add_subcommand("run", "execute seeded experiment runs");
  run->add_option("--env", spec.env_arg,
                  "confusing-chain | combination-lock | layered-star | "
                  "file:<path>");
  run->add_option("--env-param", spec.env_params, "environment overrides k=v");
  run->add_option("--algo", spec.algo, "disco | ucb");
  run->add_option("--L", spec.params.L, "controllability radius");
  run->add_option("--eps", spec.params.epsilon, "accuracy");
  run->add_option("--delta", spec.params.delta, "confidence");
  run->add_option("--mode", mode, "theoretical | practical");
  run->add_option("--seeds", spec.seeds, "number of independent runs");
  run->add_option("--base-seed", spec.base_seed, "seed of the run family");
  run->add_option("--workers", spec.workers, "worker threads");
  run->add_option("--out-dir", spec.out_dir, "CSV output directory");
  run->add_option("--step-cap", spec.disco.step_cap,
                  "abort a run beyond this many environment steps");
  run->add_option("--curve-stride", spec.disco.curve_stride,
                  "discovery-curve sampling stride");
  run->add_flag("--disco-max-allocation", disco_max_alloc,
                "use the max-over-pairs allocation target");
  run->add_flag("--ucb-raw-counts", ucb_raw_counts,
                "confidence terms on raw counts N");
  run->add_flag("--ucb-bucketed-counts", ucb_bucketed_counts,
                "confidence terms on N/H");
  run->add_flag("--ucb-log-episodes", ucb_log_episodes,
                "scale the episode budget by ln|K|^2");
  run->add_flag("--ucb-flat-episodes", ucb_flat_episodes,
                "constant episode budget");
  run->add_flag("--ucb-full-horizon", ucb_full_horizon,
                "optimize arrival within H instead of the success window");
  run->add_flag("--ucb-abort-hopeless", ucb_abort_hopeless,
                "stop a round early once its success test cannot pass");
  run->add_option("--ucb-discovery-target", spec.ucb.discovery_target,
                  "per-pair sample floor (0 = formula default)");
  run->add_option("--ucb-success-slack", spec.ucb.success_slack,
                  "round acceptance threshold L + slack*eps");
  run->add_option("--ucb-candidate-slack", spec.ucb.candidate_slack,
                  "pool threshold L + slack*eps");
  run->add_option("--ucb-bonus-scale", spec.ucb.bonus_scale,
                  "multiplier on the exploration bonuses");

  CLI::App* oracle =
      app.add_subcommand("oracle", "print exact controllable sets and values");
  oracle->add_option("--env", spec.env_arg, "environment name or file:<path>");
  oracle->add_option("--env-param", spec.env_params,
                     "environment overrides k=v");
  oracle->add_option("--L", oracle_l, "controllability radius");

  CLI::App* verify =
      app.add_subcommand("verify", "recompute AX flags of a runs.csv");
  verify->add_option("--runs", runs_path, "runs.csv path")->required();
  verify->add_option("--env", spec.env_arg, "environment name or file:<path>");
  verify->add_option("--env-param", spec.env_params,
                     "environment overrides k=v");
  verify->add_option("--L", spec.params.L, "controllability radius");
  verify->add_option("--eps", spec.params.epsilon, "accuracy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadSpec;
  }

  try {
    if (run->parsed()) {
      if (mode == "theoretical") {
        spec.params.mode = AlgoParams::Mode::kTheoretical;
      } else if (mode == "practical") {
        spec.params.mode = AlgoParams::Mode::kPractical;
      } else {
        std::fprintf(stderr, "unknown mode: %s\n", mode.c_str());
        return kExitBadSpec;
      }
      const std::int64_t step_cap = spec.disco.step_cap;
      const int stride = spec.disco.curve_stride;
      spec.ucb.step_cap = step_cap;
      spec.ucb.curve_stride = stride;
      resolve_default_tunings(spec);
      if (disco_max_alloc) spec.disco.per_pair_allocation = false;
      if (ucb_raw_counts) spec.ucb.bucketed_counts = false;
      if (ucb_bucketed_counts) spec.ucb.bucketed_counts = true;
      if (ucb_log_episodes) spec.ucb.episode_log_factor = true;
      if (ucb_flat_episodes) spec.ucb.episode_log_factor = false;
      if (ucb_full_horizon) {
        spec.ucb.objective = UcbConfig::Objective::kFullHorizon;
      }
      if (ucb_abort_hopeless) spec.ucb.abort_hopeless = true;
      return cmd_run(spec);
    }
    if (oracle->parsed()) {
      const TabularMdp env = make_env(spec.env_arg, spec.env_params);
      print_oracle(env, compute_oracle(env, oracle_l));
      return kExitOk;
    }
    const TabularMdp env = make_env(spec.env_arg, spec.env_params);
    return cmd_verify(runs_path, env, spec.params.L, spec.params.epsilon);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid spec: %s\n", e.what());
    return kExitBadSpec;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "run failure: %s\n", e.what());
    return kExitRunFailure;
  }
}
