// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "irsopt/bench.hpp"
#include "irsopt/channel.hpp"
#include "irsopt/rng.hpp"
#include "irsopt/spgm.hpp"

using namespace irsopt;

namespace {

std::vector<ResultRow> collect(const ExperimentSpec& spec) {
  std::vector<ResultRow> rows;
  run_experiment(spec, [&rows](const ResultRow& row) { rows.push_back(row); });
  return rows;
}

ResultRow without_wall(ResultRow row) {
  row.wall_time_s = 0.0;
  return row;
}

/// Small, fast spec used by most of the pipeline tests.
ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  spec.experiment = Experiment::kSeVsSnr;
  spec.n_values = {4};
  spec.snr_values_db = {10.0};
  spec.trials = 3;
  spec.solvers = {SolverKind::kDsm};
  spec.source_antennas = 4;
  spec.dest_antennas = 4;
  spec.master_seed = 11;
  return spec;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

double mean_of(const std::vector<double>& values) {
  double acc = 0.0;
  for (const double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

}  // namespace

TEST_CASE("experiment and solver names round-trip") {
  for (const auto e : {Experiment::kSeVsSnr, Experiment::kItersVsN, Experiment::kTimeVsN,
                       Experiment::kOracleCheck})
    CHECK(experiment_from_string(to_string(e)) == e);
  for (const auto s : {SolverKind::kDsm, SolverKind::kGa, SolverKind::kGrid,
                       SolverKind::kRandomBaseline})
    CHECK(solver_from_string(to_string(s)) == s);
  CHECK(to_string(Experiment::kSeVsSnr) == "se_vs_snr");
  CHECK(to_string(SolverKind::kRandomBaseline) == "random_baseline");
  CHECK_THROWS_AS(experiment_from_string("figure_2"), SpecError);
  CHECK_THROWS_AS(solver_from_string("admm"), SpecError);
}

TEST_CASE("ExperimentSpec::validate rejects malformed studies") {
  auto spec = tiny_spec();
  spec.trials = 0;
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.n_values.clear();
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.snr_values_db.clear();
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.solvers.clear();
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.source_antennas = 0;
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.rician_beta = -1.0;
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.solver_opts.epsilon = 0.0;
  CHECK_THROWS_AS(spec.validate(), SpecError);

  spec = tiny_spec();
  spec.experiment = Experiment::kOracleCheck;
  spec.n_values = {5};  // 64^5 grid points: the evaluation budget governs
  CHECK_THROWS_AS(spec.validate(), BudgetError);
}

TEST_CASE("ExperimentSpec::validate applies the grid budget") {
  auto spec = tiny_spec();
  spec.experiment = Experiment::kTimeVsN;
  spec.n_values = {16};
  spec.solvers = {SolverKind::kGrid};
  spec.solver_opts.grid_q = 2049;
  CHECK_THROWS_AS(spec.validate(), BudgetError);

  spec.n_values = {2};
  spec.solver_opts.grid_q = 64;
  CHECK_NOTHROW(spec.validate());
}

TEST_CASE("one trial, one solver, one point emits exactly one row") {
  auto spec = tiny_spec();
  spec.trials = 1;
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].experiment == "se_vs_snr");
  CHECK(rows[0].solver == "dsm");
  CHECK(rows[0].irs_elements == 4);
  CHECK(rows[0].snr_db == 10.0);
  CHECK(rows[0].trial == 0);
  CHECK(rows[0].sum_rate > 0.0);
  CHECK(rows[0].psi_final > 0.0);
  CHECK(rows[0].converged);
}

TEST_CASE("row grid covers every (N, snr, trial, solver) combination") {
  auto spec = tiny_spec();
  spec.n_values = {2, 4};
  spec.snr_values_db = {0.0, 10.0};
  spec.trials = 2;
  spec.solvers = {SolverKind::kDsm, SolverKind::kRandomBaseline};
  const auto rows = collect(spec);
  CHECK(rows.size() == 2 * 2 * 2 * 2);
  std::map<std::tuple<int, double, int, std::string>, int> seen;
  for (const auto& row : rows)
    ++seen[{row.irs_elements, row.snr_db, row.trial, row.solver}];
  CHECK(seen.size() == rows.size());  // no duplicates
  for (const auto& [key, count] : seen) CHECK(count == 1);
}

TEST_CASE("fair start: all solvers of a trial share channels and initial phases") {
  auto spec = tiny_spec();
  spec.trials = 2;
  spec.solvers = {SolverKind::kDsm, SolverKind::kRandomBaseline};
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 4);

  for (int trial = 0; trial < 2; ++trial) {
    const auto& dsm = rows[2 * trial];
    const auto& random = rows[2 * trial + 1];
    CHECK(dsm.seed == random.seed);

    // The trial state is reproducible from the row seed alone: channels
    // first, then the shared starting phases.
    SystemConfig config;
    config.source_antennas = spec.source_antennas;
    config.dest_antennas = spec.dest_antennas;
    config.irs_elements = 4;
    config.snr = std::pow(10.0, dsm.snr_db / 10.0);
    config.seed = dsm.seed;
    Rng rng = make_rng(dsm.seed);
    const ChannelSet channels = gen_channel_set(config, rng);
    std::uniform_real_distribution<double> uniform_phase(0.0, kTwoPi);
    RVec theta(4);
    for (int i = 0; i < 4; ++i) theta[i] = uniform_phase(rng);

    CHECK(random.psi_final == spgm_objective(channels, PhaseVector(theta)));
    CHECK(dsm.psi_final >= random.psi_final);
  }
}

TEST_CASE("expected seed derivation: master seed and indices pin each trial") {
  auto spec = tiny_spec();
  spec.trials = 2;
  const auto rows = collect(spec);
  for (const auto& row : rows) {
    const std::uint64_t expected =
        derive_seed(spec.master_seed, {static_cast<std::uint64_t>(row.irs_elements),
                                       bits_of(row.snr_db), static_cast<std::uint64_t>(row.trial)});
    CHECK(row.seed == expected);
  }
}

TEST_CASE("subset reruns reproduce the same rows") {
  auto full = tiny_spec();
  full.n_values = {2, 4};
  full.trials = 2;
  const auto full_rows = collect(full);

  auto subset = full;
  subset.n_values = {4};
  const auto subset_rows = collect(subset);

  std::vector<ResultRow> full_n4;
  for (const auto& row : full_rows)
    if (row.irs_elements == 4) full_n4.push_back(row);

  REQUIRE(full_n4.size() == subset_rows.size());
  for (std::size_t i = 0; i < subset_rows.size(); ++i)
    CHECK(without_wall(full_n4[i]) == without_wall(subset_rows[i]));
}

TEST_CASE("tighter tolerance never needs fewer DSM sweeps") {
  ExperimentSpec loose;
  loose.experiment = Experiment::kItersVsN;
  loose.n_values = {8};
  loose.snr_values_db = {10.0};
  loose.trials = 10;
  loose.solvers = {SolverKind::kDsm};
  loose.source_antennas = 4;
  loose.dest_antennas = 4;
  loose.master_seed = 3;
  loose.solver_opts.epsilon = 1e-2;

  auto tight = loose;
  tight.solver_opts.epsilon = 1e-3;

  std::vector<double> loose_iters, tight_iters;
  for (const auto& row : collect(loose)) loose_iters.push_back(row.iterations);
  for (const auto& row : collect(tight)) tight_iters.push_back(row.iterations);
  CHECK(mean_of(tight_iters) >= mean_of(loose_iters));
}

TEST_CASE("iteration ordering holds on a reduced Fig. 3 protocol") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kItersVsN;
  spec.n_values = {8, 16};
  spec.snr_values_db = {10.0};
  spec.trials = 15;
  spec.solvers = {SolverKind::kDsm, SolverKind::kGa};
  spec.source_antennas = 4;
  spec.dest_antennas = 4;
  spec.master_seed = 5;

  std::map<std::pair<std::string, int>, std::vector<double>> iters;
  for (const auto& row : collect(spec))
    iters[{row.solver, row.irs_elements}].push_back(row.iterations);
  for (const int n : spec.n_values)
    CHECK(mean_of(iters[{"dsm", n}]) < mean_of(iters[{"ga", n}]));
}

TEST_CASE("time_vs_n rows carry positive finite timings") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kTimeVsN;
  spec.n_values = {4, 8};
  spec.snr_values_db = {10.0};
  spec.trials = 3;
  spec.solvers = {SolverKind::kDsm};
  spec.source_antennas = 4;
  spec.dest_antennas = 4;
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) {
    CHECK(row.wall_time_s > 0.0);
    CHECK(std::isfinite(row.wall_time_s));
  }
}

TEST_CASE("oracle_check pairs a dsm row with a grid row per trial") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kOracleCheck;
  spec.n_values = {2};
  spec.snr_values_db = {0.0};
  spec.trials = 4;
  spec.source_antennas = 2;
  spec.dest_antennas = 2;
  spec.solver_opts.grid_q = 32;
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 8);
  for (int trial = 0; trial < 4; ++trial) {
    CHECK(rows[2 * trial].solver == "dsm");
    CHECK(rows[2 * trial + 1].solver == "grid");
    CHECK(rows[2 * trial].seed == rows[2 * trial + 1].seed);
  }
}

TEST_CASE("oracle_check at N=1 stays within one grid cell of the optimum") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kOracleCheck;
  spec.n_values = {1};
  spec.snr_values_db = {0.0};
  spec.trials = 50;
  spec.source_antennas = 2;
  spec.dest_antennas = 2;
  spec.solver_opts.grid_q = 512;
  spec.solver_opts.epsilon = 1e-9;
  const auto rows = collect(spec);
  REQUIRE(rows.size() == 100);
  for (int trial = 0; trial < 50; ++trial) {
    const double dsm_rate = rows[2 * trial].sum_rate;
    const double grid_rate = rows[2 * trial + 1].sum_rate;
    // DSM solves the single phase exactly for the surrogate; the grid can
    // only beat it by the one-cell wiggle room of the capacity landscape.
    CHECK((grid_rate - dsm_rate) / grid_rate < 0.01);
  }
}

TEST_CASE("oracle_check reruns are identical apart from wall time") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kOracleCheck;
  spec.n_values = {2};
  spec.snr_values_db = {0.0};
  spec.trials = 3;
  spec.source_antennas = 2;
  spec.dest_antennas = 2;
  spec.solver_opts.grid_q = 16;

  const auto first = collect(spec);
  const auto second = collect(spec);
  REQUIRE(first.size() == second.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    CHECK(without_wall(first[i]) == without_wall(second[i]));
}

TEST_CASE("CSV header matches the published schema") {
  CHECK(csv_header() ==
        "experiment,solver,N,snr_db,trial,seed,sum_rate,psi_final,iterations,wall_time_s,converged");
}

TEST_CASE("CSV lines round-trip exactly") {
  ResultRow row;
  row.experiment = "se_vs_snr";
  row.solver = "dsm";
  row.irs_elements = 16;
  row.snr_db = -7.5;
  row.trial = 42;
  row.seed = 18446744073709551615ULL;  // max uint64 survives
  row.sum_rate = 12.345678901234567;
  row.psi_final = 1e-300;
  row.iterations = 9001;
  row.wall_time_s = 0.015625;
  row.converged = true;
  CHECK(parse_csv_line(to_csv_line(row)) == row);

  row.converged = false;
  row.snr_db = 0.1;  // not exactly representable; shortest form must round-trip
  CHECK(parse_csv_line(to_csv_line(row)) == row);
}

TEST_CASE("parse_csv_line rejects malformed rows") {
  CHECK_THROWS_AS(parse_csv_line("a,b,c"), IoError);
  CHECK_THROWS_AS(parse_csv_line("se_vs_snr,dsm,x,0,0,1,1,1,1,0.1,true"), IoError);
  CHECK_THROWS_AS(parse_csv_line("se_vs_snr,dsm,4,0,0,1,1,1,1,0.1,maybe"), IoError);
}

TEST_CASE("run_to_csv writes a parseable file equal to the streamed rows") {
  auto spec = tiny_spec();
  spec.trials = 2;
  const auto path = temp_file("irsopt_test_rows.csv");
  spec.output_path = path.string();
  run_to_csv(spec);

  const auto from_file = read_csv(path.string());
  const auto streamed = collect(spec);
  REQUIRE(from_file.size() == streamed.size());
  for (std::size_t i = 0; i < streamed.size(); ++i) {
    CHECK(without_wall(from_file[i]) == without_wall(streamed[i]));
    CHECK(from_file[i].wall_time_s > 0.0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("I/O failures carry the path and throw IoError") {
  auto spec = tiny_spec();
  spec.output_path = "/nonexistent_dir/out.csv";
  CHECK_THROWS_WITH_AS(run_to_csv(spec), doctest::Contains("/nonexistent_dir/out.csv"), IoError);
  CHECK_THROWS_AS(read_csv("/nonexistent_dir/in.csv"), IoError);

  const auto bad_header = temp_file("irsopt_bad_header.csv");
  {
    std::ofstream out(bad_header);
    out << "a,b,c\n";
  }
  CHECK_THROWS_AS(read_csv(bad_header.string()), IoError);
  std::filesystem::remove(bad_header);
}

TEST_CASE("config file overrides the spec") {
  const auto path = temp_file("irsopt_test_config.txt");
  {
    std::ofstream out(path);
    out << "# overrides for a quick smoke run\n";
    out << "n = 2, 4\n";
    out << "snr-db = 0, 5\n";
    out << "trials = 7\n";
    out << "epsilon = 1e-4\n";
    out << "solvers = dsm, random_baseline\n";
    out << "seed = 99\n";
    out << "q = 32\n";
    out << "k = 3\n";
    out << "l = 2\n";
    out << "beta = 4.5\n";
    out << "max-iters = 500\n";
    out << "out = override.csv\n";
  }
  auto spec = tiny_spec();
  apply_config_file(spec, path.string());
  CHECK(spec.n_values == std::vector<int>{2, 4});
  CHECK(spec.snr_values_db == std::vector<double>{0.0, 5.0});
  CHECK(spec.trials == 7);
  CHECK(spec.solver_opts.epsilon == 1e-4);
  REQUIRE(spec.solvers.size() == 2);
  CHECK(spec.solvers[0] == SolverKind::kDsm);
  CHECK(spec.solvers[1] == SolverKind::kRandomBaseline);
  CHECK(spec.master_seed == 99);
  CHECK(spec.solver_opts.grid_q == 32);
  CHECK(spec.source_antennas == 3);
  CHECK(spec.dest_antennas == 2);
  CHECK(spec.rician_beta == 4.5);
  CHECK(spec.solver_opts.max_iters == 500);
  CHECK(spec.output_path == "override.csv");
  std::filesystem::remove(path);
}

TEST_CASE("config file rejects unknown keys and malformed lines") {
  const auto unknown = temp_file("irsopt_bad_key.txt");
  {
    std::ofstream out(unknown);
    out << "stepsize = 0.1\n";
  }
  auto spec = tiny_spec();
  CHECK_THROWS_AS(apply_config_file(spec, unknown.string()), SpecError);
  std::filesystem::remove(unknown);

  const auto malformed = temp_file("irsopt_bad_line.txt");
  {
    std::ofstream out(malformed);
    out << "trials\n";
  }
  CHECK_THROWS_AS(apply_config_file(spec, malformed.string()), SpecError);
  std::filesystem::remove(malformed);

  CHECK_THROWS_AS(apply_config_file(spec, "/nonexistent_dir/config.txt"), IoError);
}

TEST_CASE("dsm beats the random baseline on average at a reduced scale") {
  ExperimentSpec spec;
  spec.experiment = Experiment::kSeVsSnr;
  spec.n_values = {4, 8};
  spec.snr_values_db = {0.0, 10.0};
  spec.trials = 30;
  spec.solvers = {SolverKind::kDsm, SolverKind::kRandomBaseline};
  spec.source_antennas = 4;
  spec.dest_antennas = 4;
  spec.master_seed = 21;

  std::map<std::tuple<std::string, int, double>, std::vector<double>> rates;
  for (const auto& row : collect(spec))
    rates[{row.solver, row.irs_elements, row.snr_db}].push_back(row.sum_rate);

  for (const int n : spec.n_values) {
    for (const double snr : spec.snr_values_db) {
      CHECK(mean_of(rates[{"dsm", n, snr}]) >= mean_of(rates[{"random_baseline", n, snr}]));
    }
  }
  // more reflecting elements help
  for (const double snr : spec.snr_values_db)
    CHECK(mean_of(rates[{"dsm", 8, snr}]) > mean_of(rates[{"dsm", 4, snr}]));
}
