// SPDX-License-Identifier: Apache-2.0
#include "irsopt/bench.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "irsopt/channel.hpp"
#include "irsopt/mimo.hpp"
#include "irsopt/rng.hpp"

namespace irsopt {

namespace {

using Clock = std::chrono::steady_clock;

// Reserved trial indices for draws that must not collide with real trials.
constexpr std::uint64_t kTuningTrial = 0x7475'6e65ULL << 32;  // "tune"
constexpr std::uint64_t kWarmupTrial = 0x7761'726dULL << 32;  // "warm"

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct TrialData {
  ChannelSet channels;
  PhaseVector theta_init;
  std::uint64_t seed = 0;
};

TrialData make_trial(const ExperimentSpec& spec, int n, double snr_db, std::uint64_t trial) {
  TrialData data;
  data.seed = derive_seed(spec.master_seed, {static_cast<std::uint64_t>(n), bits_of(snr_db), trial});
  Rng rng = make_rng(data.seed);
  SystemConfig config;
  config.source_antennas = spec.source_antennas;
  config.dest_antennas = spec.dest_antennas;
  config.irs_elements = n;
  config.snr = db_to_linear(snr_db);
  config.rician_beta = spec.rician_beta;
  config.seed = data.seed;
  data.channels = gen_channel_set(config, rng);

  std::uniform_real_distribution<double> uniform_phase(0.0, kTwoPi);
  RVec theta(n);
  for (int i = 0; i < n; ++i) theta[i] = uniform_phase(rng);
  data.theta_init = PhaseVector(theta);
  return data;
}

double tuned_step_for(const ExperimentSpec& spec, int n) {
  const TrialData tuning = make_trial(spec, n, spec.snr_values_db.front(), kTuningTrial);
  const std::vector<double> candidates(kDefaultGaSteps.begin(), kDefaultGaSteps.end());
  return tune_ga_step(tuning.channels, spec.solver_opts, candidates, tuning.theta_init);
}

ResultRow base_row(const ExperimentSpec& spec, SolverKind solver, int n, double snr_db,
                   std::uint64_t trial, std::uint64_t seed) {
  ResultRow row;
  row.experiment = to_string(spec.experiment);
  row.solver = to_string(solver);
  row.irs_elements = n;
  row.snr_db = snr_db;
  row.trial = static_cast<int>(trial);
  row.seed = seed;
  return row;
}

/// Runs one solver on one trial and fills the outcome-dependent fields.
ResultRow solve_row(const ExperimentSpec& spec, SolverKind solver, int n, double snr_db,
                    std::uint64_t trial, const TrialData& data, double ga_step) {
  const double snr = db_to_linear(snr_db);
  ResultRow row = base_row(spec, solver, n, snr_db, trial, data.seed);

  PhaseVector theta_final;
  switch (solver) {
    case SolverKind::kDsm: {
      const SolveOutcome outcome = dsm_solve(data.channels, spec.solver_opts, data.theta_init);
      theta_final = outcome.theta;
      row.iterations = outcome.iterations;
      row.converged = outcome.converged;
      row.wall_time_s = outcome.wall_time;
      break;
    }
    case SolverKind::kGa: {
      SolverOptions opts = spec.solver_opts;
      opts.ga_step = ga_step;
      const SolveOutcome outcome = ga_solve(data.channels, opts, data.theta_init);
      theta_final = outcome.theta;
      row.iterations = outcome.iterations;
      row.converged = outcome.converged && !outcome.diverged;
      row.wall_time_s = outcome.wall_time;
      break;
    }
    case SolverKind::kGrid: {
      const auto start = Clock::now();
      const GridResult result = grid_search(data.channels, spec.solver_opts, snr);
      row.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
      theta_final = result.theta;
      row.iterations = 0;
      row.converged = true;
      break;
    }
    case SolverKind::kRandomBaseline: {
      const auto start = Clock::now();
      theta_final = data.theta_init;
      row.psi_final = spgm_objective(data.channels, theta_final);
      row.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
      row.iterations = 0;
      row.converged = true;
      break;
    }
  }

  if (solver != SolverKind::kRandomBaseline)
    row.psi_final = spgm_objective(data.channels, theta_final);
  row.sum_rate = end_to_end_rate(data.channels, theta_final, snr).sum_rate;
  return row;
}

bool has_solver(const ExperimentSpec& spec, SolverKind kind) {
  return std::find(spec.solvers.begin(), spec.solvers.end(), kind) != spec.solvers.end();
}

void check_grid_budget(const ExperimentSpec& spec) {
  for (const int n : spec.n_values) {
    double log_points = n * std::log10(static_cast<double>(spec.solver_opts.grid_q));
    if (log_points > std::log10(static_cast<double>(kGridBudget)) + 1e-12)
      throw BudgetError("grid search at N=" + std::to_string(n) + " with Q=" +
                        std::to_string(spec.solver_opts.grid_q) + " exceeds the budget of " +
                        std::to_string(kGridBudget) + " evaluations");
  }
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kSeVsSnr: return "se_vs_snr";
    case Experiment::kItersVsN: return "iters_vs_n";
    case Experiment::kTimeVsN: return "time_vs_n";
    case Experiment::kOracleCheck: return "oracle_check";
  }
  throw std::logic_error("unknown experiment");
}

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::kDsm: return "dsm";
    case SolverKind::kGa: return "ga";
    case SolverKind::kGrid: return "grid";
    case SolverKind::kRandomBaseline: return "random_baseline";
  }
  throw std::logic_error("unknown solver");
}

Experiment experiment_from_string(const std::string& name) {
  if (name == "se_vs_snr") return Experiment::kSeVsSnr;
  if (name == "iters_vs_n") return Experiment::kItersVsN;
  if (name == "time_vs_n") return Experiment::kTimeVsN;
  if (name == "oracle_check") return Experiment::kOracleCheck;
  throw SpecError("unknown experiment: " + name);
}

SolverKind solver_from_string(const std::string& name) {
  if (name == "dsm") return SolverKind::kDsm;
  if (name == "ga") return SolverKind::kGa;
  if (name == "grid") return SolverKind::kGrid;
  if (name == "random_baseline") return SolverKind::kRandomBaseline;
  throw SpecError("unknown solver: " + name);
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw SpecError("trials must be >= 1");
  if (n_values.empty()) throw SpecError("at least one N value is required");
  for (const int n : n_values)
    if (n < 1) throw SpecError("N values must be >= 1");
  if (snr_values_db.empty()) throw SpecError("at least one SNR value is required");
  if (solvers.empty()) throw SpecError("at least one solver is required");
  if (source_antennas < 1 || dest_antennas < 1) throw SpecError("antenna counts must be >= 1");
  if (!(rician_beta >= 0.0)) throw SpecError("rician_beta must be >= 0");
  try {
    solver_opts.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  if (has_solver(*this, SolverKind::kGrid) || experiment == Experiment::kOracleCheck)
    check_grid_budget(*this);
  if (experiment == Experiment::kOracleCheck)
    for (const int n : n_values)
      if (n > 4) throw SpecError("oracle_check requires N <= 4 (exhaustive grid)");
}

void run_se_vs_snr(const ExperimentSpec& spec, const RowSink& sink) {
  for (const int n : spec.n_values) {
    const double ga_step = has_solver(spec, SolverKind::kGa) ? tuned_step_for(spec, n) : 0.0;
    for (const double snr_db : spec.snr_values_db)
      for (int trial = 0; trial < spec.trials; ++trial) {
        const TrialData data = make_trial(spec, n, snr_db, static_cast<std::uint64_t>(trial));
        for (const SolverKind solver : spec.solvers)
          sink(solve_row(spec, solver, n, snr_db, static_cast<std::uint64_t>(trial), data, ga_step));
      }
  }
}

void run_iters_vs_n(const ExperimentSpec& spec, const RowSink& sink) {
  const double snr_db = spec.snr_values_db.front();
  for (const int n : spec.n_values) {
    const double ga_step = has_solver(spec, SolverKind::kGa) ? tuned_step_for(spec, n) : 0.0;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const TrialData data = make_trial(spec, n, snr_db, static_cast<std::uint64_t>(trial));
      for (const SolverKind solver : spec.solvers)
        sink(solve_row(spec, solver, n, snr_db, static_cast<std::uint64_t>(trial), data, ga_step));
    }
  }
}

void run_time_vs_n(const ExperimentSpec& spec, const RowSink& sink) {
  const double snr_db = spec.snr_values_db.front();
  for (const int n : spec.n_values) {
    const double ga_step = has_solver(spec, SolverKind::kGa) ? tuned_step_for(spec, n) : 0.0;
    // Warm-up solves populate caches and code paths; their rows are dropped.
    const TrialData warmup = make_trial(spec, n, snr_db, kWarmupTrial);
    for (const SolverKind solver : spec.solvers)
      (void)solve_row(spec, solver, n, snr_db, kWarmupTrial, warmup, ga_step);
    for (int trial = 0; trial < spec.trials; ++trial) {
      const TrialData data = make_trial(spec, n, snr_db, static_cast<std::uint64_t>(trial));
      for (const SolverKind solver : spec.solvers)
        sink(solve_row(spec, solver, n, snr_db, static_cast<std::uint64_t>(trial), data, ga_step));
    }
  }
}

void run_oracle_check(const ExperimentSpec& spec, const RowSink& sink) {
  const double snr_db = spec.snr_values_db.front();
  for (const int n : spec.n_values)
    for (int trial = 0; trial < spec.trials; ++trial) {
      const TrialData data = make_trial(spec, n, snr_db, static_cast<std::uint64_t>(trial));
      sink(solve_row(spec, SolverKind::kDsm, n, snr_db, static_cast<std::uint64_t>(trial), data, 0.0));
      sink(solve_row(spec, SolverKind::kGrid, n, snr_db, static_cast<std::uint64_t>(trial), data, 0.0));
    }
}

void run_experiment(const ExperimentSpec& spec, const RowSink& sink) {
  spec.validate();
  switch (spec.experiment) {
    case Experiment::kSeVsSnr: run_se_vs_snr(spec, sink); return;
    case Experiment::kItersVsN: run_iters_vs_n(spec, sink); return;
    case Experiment::kTimeVsN: run_time_vs_n(spec, sink); return;
    case Experiment::kOracleCheck: run_oracle_check(spec, sink); return;
  }
  throw std::logic_error("unknown experiment");
}

void run_to_csv(const ExperimentSpec& spec) {
  spec.validate();
  const std::string path = spec.output_path.empty() ? to_string(spec.experiment) + ".csv"
                                                    : spec.output_path;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << csv_header() << '\n';
  run_experiment(spec, [&](const ResultRow& row) {
    out << to_csv_line(row) << '\n';
    if (!out) throw IoError("write failed: " + path);
  });
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

// --- CSV -----------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& s) {
  double v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw IoError("malformed CSV number: '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
  Int v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw IoError("malformed CSV integer: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delim)) fields.push_back(field);
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

}  // namespace

std::string csv_header() {
  return "experiment,solver,N,snr_db,trial,seed,sum_rate,psi_final,iterations,wall_time_s,converged";
}

std::string to_csv_line(const ResultRow& row) {
  std::string line;
  line += row.experiment;
  line += ',';
  line += row.solver;
  line += ',';
  line += std::to_string(row.irs_elements);
  line += ',';
  line += format_double(row.snr_db);
  line += ',';
  line += std::to_string(row.trial);
  line += ',';
  line += std::to_string(row.seed);
  line += ',';
  line += format_double(row.sum_rate);
  line += ',';
  line += format_double(row.psi_final);
  line += ',';
  line += std::to_string(row.iterations);
  line += ',';
  line += format_double(row.wall_time_s);
  line += ',';
  line += row.converged ? "true" : "false";
  return line;
}

ResultRow parse_csv_line(const std::string& line) {
  const std::vector<std::string> fields = split(line, ',');
  if (fields.size() != 11)
    throw IoError("malformed CSV row: expected 11 fields, got " + std::to_string(fields.size()));
  ResultRow row;
  row.experiment = fields[0];
  row.solver = fields[1];
  row.irs_elements = parse_int<int>(fields[2]);
  row.snr_db = parse_double(fields[3]);
  row.trial = parse_int<int>(fields[4]);
  row.seed = parse_int<std::uint64_t>(fields[5]);
  row.sum_rate = parse_double(fields[6]);
  row.psi_final = parse_double(fields[7]);
  row.iterations = parse_int<int>(fields[8]);
  row.wall_time_s = parse_double(fields[9]);
  if (fields[10] == "true")
    row.converged = true;
  else if (fields[10] == "false")
    row.converged = false;
  else
    throw IoError("malformed CSV flag: '" + fields[10] + "'");
  return row;
}

std::vector<ResultRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV file: " + path);
  if (line != csv_header()) throw IoError("unexpected CSV header in " + path);
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line));
  }
  return rows;
}

// --- configuration file ---------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  for (const std::string& item : split(value, ','))
    if (const std::string t = trim(item); !t.empty()) items.push_back(t);
  return items;
}

double parse_config_double(const std::string& value, const std::string& key) {
  try {
    std::size_t consumed = 0;
    const double v = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw SpecError("config: bad numeric value for '" + key + "': " + value);
  }
}

}  // namespace

void apply_config_file(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string entry = trim(line);
    if (entry.empty()) continue;
    const std::size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw SpecError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = trim(entry.substr(0, eq));
    const std::string value = trim(entry.substr(eq + 1));
    if (key.empty() || value.empty())
      throw SpecError("config: line " + std::to_string(lineno) + " is not 'key = value'");

    if (key == "n") {
      spec.n_values.clear();
      for (const std::string& item : split_list(value))
        spec.n_values.push_back(static_cast<int>(parse_config_double(item, key)));
    } else if (key == "snr-db") {
      spec.snr_values_db.clear();
      for (const std::string& item : split_list(value))
        spec.snr_values_db.push_back(parse_config_double(item, key));
    } else if (key == "trials") {
      spec.trials = static_cast<int>(parse_config_double(value, key));
    } else if (key == "epsilon") {
      spec.solver_opts.epsilon = parse_config_double(value, key);
    } else if (key == "solvers") {
      spec.solvers.clear();
      for (const std::string& item : split_list(value)) spec.solvers.push_back(solver_from_string(item));
    } else if (key == "seed") {
      spec.master_seed = parse_int<std::uint64_t>(value);
    } else if (key == "q") {
      spec.solver_opts.grid_q = static_cast<int>(parse_config_double(value, key));
    } else if (key == "out") {
      spec.output_path = value;
    } else if (key == "k") {
      spec.source_antennas = static_cast<int>(parse_config_double(value, key));
    } else if (key == "l") {
      spec.dest_antennas = static_cast<int>(parse_config_double(value, key));
    } else if (key == "beta") {
      spec.rician_beta = parse_config_double(value, key);
    } else if (key == "max-iters") {
      spec.solver_opts.max_iters = static_cast<int>(parse_config_double(value, key));
    } else {
      throw SpecError("config: unknown key '" + key + "' on line " + std::to_string(lineno));
    }
  }
}

}  // namespace irsopt
