// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "irsopt/spgm.hpp"
#include "irsopt/types.hpp"

namespace irsopt {

/// Raised when an exhaustive search would exceed the evaluation budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kGridBudget = 100'000'000;

enum class GridObjective { kSumCapacity, kSpgm };

struct SolverOptions {
  double epsilon = 1e-3;  // termination tolerance on |psi_i - psi_{i-1}|
  int max_iters = 10'000;
  double ga_step = 1e-2;       // gradient-ascent step size alpha
  int grid_q = 64;             // quantization levels per phase (grid search)
  GridObjective grid_objective = GridObjective::kSumCapacity;
  bool record_coordinate_trace = false;  // test mode: psi after every coordinate update

  void validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("SolverOptions: epsilon must be > 0");
    if (max_iters < 1) throw std::invalid_argument("SolverOptions: max_iters must be >= 1");
    if (!(ga_step > 0.0)) throw std::invalid_argument("SolverOptions: ga_step must be > 0");
    if (grid_q < 2) throw std::invalid_argument("SolverOptions: grid_q must be >= 2");
  }
};

struct SolveOutcome {
  PhaseVector theta;
  std::vector<double> psi_trace;  // psi after each iteration (sweep / gradient step)
  int iterations = 0;
  bool converged = false;  // the epsilon criterion fired before max_iters
  bool diverged = false;   // gradient ascent only
  double wall_time = 0.0;  // seconds
  std::vector<double> coordinate_psi_trace;  // filled when record_coordinate_trace
};

/// Coordinate ascent over the phases: each sweep updates theta_1..theta_N
/// in order through the closed-form per-coordinate maximizer, using
/// already-updated coordinates within the sweep.  The objective never
/// decreases at any single update.  Terminates when the per-sweep
/// objective change drops to epsilon or max_iters is reached.  Throws
/// std::runtime_error if the objective turns non-finite.
SolveOutcome dsm_solve(const ChannelSet& channels, const SolverOptions& options,
                       const PhaseVector& theta_init);

/// Fixed-step gradient ascent on the same objective and termination
/// criterion.  Oversized steps are reported through `diverged` rather
/// than an error.
SolveOutcome ga_solve(const ChannelSet& channels, const SolverOptions& options,
                      const PhaseVector& theta_init);

struct GridResult {
  PhaseVector theta;
  double objective_value = 0.0;
};

/// Exhaustive search over grid_q^N phase combinations with step
/// 2*pi/grid_q, maximizing the selected objective.  Ties resolve to the
/// lexicographically smallest index vector.  Throws BudgetError when
/// grid_q^N exceeds kGridBudget.
GridResult grid_search(const ChannelSet& channels, const SolverOptions& options, double snr);

/// Runs ga_solve for every candidate step and returns the one converging
/// in the fewest iterations; if none converge, the smallest candidate.
double tune_ga_step(const ChannelSet& channels, const SolverOptions& options,
                    const std::vector<double>& candidate_steps, const PhaseVector& theta_init);

/// Log-spaced default candidate set for tune_ga_step.  The low end matters:
/// with a strong LOS component the objective's curvature grows like N^2, so
/// large IRS arrays need step sizes well below 1e-4 to avoid oscillation.
inline constexpr std::array<double, 13> kDefaultGaSteps{1e-7, 3e-7, 1e-6, 3e-6, 1e-5, 3e-5,
                                                        1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1};

}  // namespace irsopt
