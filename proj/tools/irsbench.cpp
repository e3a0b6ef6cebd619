// SPDX-License-Identifier: Apache-2.0
//
// irsbench: Monte Carlo benchmark harness for the IRS phase-shift solvers.
// Emits one CSV row per (solver, N, SNR, trial).

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irsopt/bench.hpp"

namespace {

struct CliOptions {
  std::vector<int> n_values;
  std::vector<double> snr_db;
  int trials = -1;
  double epsilon = -1.0;
  std::vector<std::string> solvers;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int grid_q = -1;
  std::string out;
  std::string config;
};

void add_common_flags(CLI::App* cmd, CliOptions& cli) {
  cmd->add_option("--n", cli.n_values, "IRS element counts")->delimiter(',');
  cmd->add_option("--snr-db", cli.snr_db, "SNR points in dB")->delimiter(',');
  cmd->add_option("--trials", cli.trials, "Monte Carlo trials per point");
  cmd->add_option("--epsilon", cli.epsilon, "solver termination tolerance");
  cmd->add_option("--solvers", cli.solvers, "subset of dsm, ga, grid, random_baseline")
      ->delimiter(',');
  cmd->add_option("--seed", cli.seed, "master RNG seed")->each([&cli](const std::string&) {
    cli.seed_set = true;
  });
  cmd->add_option("--q", cli.grid_q, "grid levels per phase (grid solver)");
  cmd->add_option("--out", cli.out, "output CSV path");
  cmd->add_option("--config", cli.config, "key-value config file overriding flags");
}

irsopt::ExperimentSpec default_spec(irsopt::Experiment experiment) {
  irsopt::ExperimentSpec spec;
  spec.experiment = experiment;
  switch (experiment) {
    case irsopt::Experiment::kSeVsSnr:
      spec.n_values = {16, 64};
      spec.snr_values_db = {-5, 0, 5, 10, 15, 20, 25};
      spec.solvers = {irsopt::SolverKind::kDsm, irsopt::SolverKind::kGa,
                      irsopt::SolverKind::kRandomBaseline};
      break;
    case irsopt::Experiment::kItersVsN:
    case irsopt::Experiment::kTimeVsN:
      spec.n_values = {8, 16, 32, 64};
      spec.snr_values_db = {10};
      spec.solvers = {irsopt::SolverKind::kDsm, irsopt::SolverKind::kGa};
      break;
    case irsopt::Experiment::kOracleCheck:
      spec.n_values = {3};
      spec.snr_values_db = {0};
      spec.solvers = {irsopt::SolverKind::kDsm, irsopt::SolverKind::kGrid};
      spec.source_antennas = 2;
      spec.dest_antennas = 2;
      spec.solver_opts.grid_q = 128;
      spec.solver_opts.epsilon = 1e-6;
      break;
  }
  return spec;
}

void apply_cli(irsopt::ExperimentSpec& spec, const CliOptions& cli) {
  if (!cli.n_values.empty()) spec.n_values = cli.n_values;
  if (!cli.snr_db.empty()) spec.snr_values_db = cli.snr_db;
  if (cli.trials >= 0) spec.trials = cli.trials;
  if (cli.epsilon >= 0.0) spec.solver_opts.epsilon = cli.epsilon;
  if (!cli.solvers.empty()) {
    spec.solvers.clear();
    for (const std::string& name : cli.solvers)
      spec.solvers.push_back(irsopt::solver_from_string(name));
  }
  if (cli.seed_set) spec.master_seed = cli.seed;
  if (cli.grid_q > 0) spec.solver_opts.grid_q = cli.grid_q;
  if (!cli.out.empty()) spec.output_path = cli.out;
}

void print_oracle_summary(const irsopt::ExperimentSpec& spec) {
  const std::string path = spec.output_path.empty()
                               ? irsopt::to_string(spec.experiment) + ".csv"
                               : spec.output_path;
  const std::vector<irsopt::ResultRow> rows = irsopt::read_csv(path);
  std::vector<double> rate_gaps;
  std::vector<double> psi_gaps;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    const auto& dsm = rows[i];
    const auto& grid = rows[i + 1];
    if (dsm.solver != "dsm" || grid.solver != "grid") continue;
    if (grid.sum_rate > 0.0) rate_gaps.push_back((grid.sum_rate - dsm.sum_rate) / grid.sum_rate);
    if (grid.psi_final > 0.0) psi_gaps.push_back((grid.psi_final - dsm.psi_final) / grid.psi_final);
  }
  auto quantile = [](std::vector<double>& v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1));
    return v[idx];
  };
  std::printf("oracle gap (grid - dsm)/grid over %zu trials:\n", rate_gaps.size());
  std::printf("  sum rate: median %.4g%%, p95 %.4g%%\n", 100.0 * quantile(rate_gaps, 0.5),
              100.0 * quantile(rate_gaps, 0.95));
  std::printf("  psi:      median %.4g%%, p95 %.4g%%\n", 100.0 * quantile(psi_gaps, 0.5),
              100.0 * quantile(psi_gaps, 0.95));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS phase-shift solver benchmarks"};
  app.require_subcommand(1);

  struct Sub {
    irsopt::Experiment experiment;
    CLI::App* cmd;
    CliOptions cli;
  };
  std::vector<Sub> subs;
  subs.push_back({irsopt::Experiment::kSeVsSnr,
                  app.add_subcommand("se-vs-snr", "spectral efficiency vs SNR"), {}});
  subs.push_back({irsopt::Experiment::kItersVsN,
                  app.add_subcommand("iters-vs-n", "iteration counts vs IRS size"), {}});
  subs.push_back({irsopt::Experiment::kTimeVsN,
                  app.add_subcommand("time-vs-n", "solver wall time vs IRS size"), {}});
  subs.push_back({irsopt::Experiment::kOracleCheck,
                  app.add_subcommand("oracle-check", "DSM vs exhaustive grid at small N"), {}});
  for (Sub& sub : subs) add_common_flags(sub.cmd, sub.cli);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // parse failures are invalid-spec errors
  }

  try {
    for (const Sub& sub : subs) {
      if (!sub.cmd->parsed()) continue;
      irsopt::ExperimentSpec spec = default_spec(sub.experiment);
      apply_cli(spec, sub.cli);
      if (!sub.cli.config.empty()) irsopt::apply_config_file(spec, sub.cli.config);
      spec.validate();
      irsopt::run_to_csv(spec);
      if (sub.experiment == irsopt::Experiment::kOracleCheck) print_oracle_summary(spec);
    }
  } catch (const irsopt::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const irsopt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
