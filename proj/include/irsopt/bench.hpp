// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irsopt/solvers.hpp"
#include "irsopt/types.hpp"

namespace irsopt {

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { kSeVsSnr, kItersVsN, kTimeVsN, kOracleCheck };
enum class SolverKind { kDsm, kGa, kGrid, kRandomBaseline };

std::string to_string(Experiment e);
std::string to_string(SolverKind s);
Experiment experiment_from_string(const std::string& name);
SolverKind solver_from_string(const std::string& name);

/// One Monte Carlo study: which experiment, over which IRS sizes, SNR
/// points, trial count and solvers.  Antenna counts and the Rician factor
/// default to the benchmark configuration (K=16, L=12, beta=10).
struct ExperimentSpec {
  Experiment experiment = Experiment::kSeVsSnr;
  std::vector<int> n_values{16, 64};
  std::vector<double> snr_values_db{-5, 0, 5, 10, 15, 20, 25};
  int trials = 200;
  std::vector<SolverKind> solvers{SolverKind::kDsm, SolverKind::kGa, SolverKind::kRandomBaseline};
  int source_antennas = 16;  // K
  int dest_antennas = 12;    // L
  double rician_beta = 10.0;
  SolverOptions solver_opts;
  std::uint64_t master_seed = 1;
  std::string output_path;

  void validate() const;  // throws SpecError / BudgetError
};

/// One solve: self-describing, order-independent.
struct ResultRow {
  std::string experiment;
  std::string solver;
  int irs_elements = 0;
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;
  double psi_final = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  bool converged = false;

  bool operator==(const ResultRow&) const = default;
};

using RowSink = std::function<void(const ResultRow&)>;

/// Fig. 2 protocol: spectral efficiency of each solver across SNR.
void run_se_vs_snr(const ExperimentSpec& spec, const RowSink& sink);
/// Fig. 3 protocol: iteration counts across N, GA step tuned per N.
void run_iters_vs_n(const ExperimentSpec& spec, const RowSink& sink);
/// Fig. 4 protocol: execution time across N, warm-up solve excluded.
void run_time_vs_n(const ExperimentSpec& spec, const RowSink& sink);
/// Desk-scale DSM-vs-grid comparison at small N.
void run_oracle_check(const ExperimentSpec& spec, const RowSink& sink);

void run_experiment(const ExperimentSpec& spec, const RowSink& sink);

/// Runs the experiment and streams rows to spec.output_path as CSV.
void run_to_csv(const ExperimentSpec& spec);

// --- CSV -----------------------------------------------------------------

std::string csv_header();
std::string to_csv_line(const ResultRow& row);
ResultRow parse_csv_line(const std::string& line);
std::vector<ResultRow> read_csv(const std::string& path);

// --- configuration file ---------------------------------------------------

/// Applies `key = value` overrides from a text file (comments start with
/// '#').  Keys mirror the CLI flags: n, snr-db, trials, epsilon, solvers,
/// seed, q, out, plus k, l, beta, max-iters.  Lists are comma-separated.
void apply_config_file(ExperimentSpec& spec, const std::string& path);

}  // namespace irsopt
