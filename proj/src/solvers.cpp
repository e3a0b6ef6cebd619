// SPDX-License-Identifier: Apache-2.0
#include "irsopt/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "irsopt/mimo.hpp"

namespace irsopt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t grid_point_count(int q, Eigen::Index n) {
  std::uint64_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    total *= static_cast<std::uint64_t>(q);
    if (total > kGridBudget) return total;
  }
  return total;
}

}  // namespace

SolveOutcome dsm_solve(const ChannelSet& channels, const SolverOptions& options,
                       const PhaseVector& theta_init) {
  options.validate();
  const auto start = Clock::now();
  const SpgmCache cache(channels);
  const Eigen::Index n = cache.size();
  if (theta_init.size() != n)
    throw std::invalid_argument("dsm_solve: theta_init has " + std::to_string(theta_init.size()) +
                                " entries, expected " + std::to_string(n));

  SolveOutcome out;
  out.theta = theta_init;
  CVec phasors = out.theta.phasors();

  double psi_prev = cache.objective(phasors);
  if (!std::isfinite(psi_prev))
    throw std::runtime_error("dsm_solve: objective is not finite at the initial point");
  out.psi_trace.push_back(psi_prev);

  while (out.iterations < options.max_iters) {
    ++out.iterations;
    for (Eigen::Index i = 0; i < n; ++i) {
      const Complex w = cache.coordinate_response(phasors, i);
      const double updated = coordinate_argmax_from_response(w, cache.coordinate_scale(i), out.theta[i]);
      out.theta.set(i, updated);
      phasors[i] = std::polar(1.0, out.theta[i]);
      if (options.record_coordinate_trace)
        out.coordinate_psi_trace.push_back(cache.objective(phasors));
    }
    const double psi = cache.objective(phasors);
    if (!std::isfinite(psi))
      throw std::runtime_error("dsm_solve: objective turned non-finite at iteration " +
                               std::to_string(out.iterations));
    out.psi_trace.push_back(psi);
    if (std::abs(psi - psi_prev) <= options.epsilon) {
      out.converged = true;
      break;
    }
    psi_prev = psi;
  }

  out.wall_time = seconds_since(start);
  return out;
}

SolveOutcome ga_solve(const ChannelSet& channels, const SolverOptions& options,
                      const PhaseVector& theta_init) {
  options.validate();
  const auto start = Clock::now();
  const SpgmCache cache(channels);
  const Eigen::Index n = cache.size();
  if (theta_init.size() != n)
    throw std::invalid_argument("ga_solve: theta_init has " + std::to_string(theta_init.size()) +
                                " entries, expected " + std::to_string(n));

  SolveOutcome out;
  out.theta = theta_init;
  CVec phasors = out.theta.phasors();

  const double psi_init = cache.objective(phasors);
  if (!std::isfinite(psi_init))
    throw std::runtime_error("ga_solve: objective is not finite at the initial point");
  out.psi_trace.push_back(psi_init);
  const double blowup = 1e12 * std::max(psi_init, 1.0);

  double psi_prev = psi_init;
  int descents = 0;
  while (out.iterations < options.max_iters) {
    ++out.iterations;
    const RVec grad = cache.gradient(phasors);
    for (Eigen::Index i = 0; i < n; ++i) {
      out.theta.set(i, out.theta[i] + options.ga_step * grad[i]);
      phasors[i] = std::polar(1.0, out.theta[i]);
    }
    const double psi = cache.objective(phasors);
    out.psi_trace.push_back(psi);
    if (!std::isfinite(psi) || psi > blowup) {
      out.diverged = true;
      break;
    }
    if (psi < psi_prev) ++descents;
    if (std::abs(psi - psi_prev) <= options.epsilon) {
      out.converged = true;
      break;
    }
    psi_prev = psi;
  }

  // The objective is bounded on the torus, so an oversized step shows up
  // as sustained oscillation rather than blow-up: descent on a large
  // share of the iterations with the tolerance never met.
  if (!out.converged && !out.diverged && out.iterations >= options.max_iters &&
      descents * 4 > out.iterations)
    out.diverged = true;

  out.wall_time = seconds_since(start);
  return out;
}

GridResult grid_search(const ChannelSet& channels, const SolverOptions& options, double snr) {
  options.validate();
  const Eigen::Index n = channels.irs_elements();
  const std::uint64_t points = grid_point_count(options.grid_q, n);
  if (points > kGridBudget)
    throw BudgetError("grid_search: " + std::to_string(options.grid_q) + "^" + std::to_string(n) +
                      " grid points exceed the budget of " + std::to_string(kGridBudget));
  if (options.grid_objective == GridObjective::kSumCapacity && !(snr > 0.0))
    throw std::invalid_argument("grid_search: snr must be > 0 for the sum-capacity objective");

  // Consistency checks and the base matrix come from the zero-phase channel.
  const PhaseVector zero = PhaseVector::Zero(n);
  const CMat base = channels.direct;
  (void)effective_channel(channels, zero);

  // Rank-1 contribution of each reflecting element.
  std::vector<CMat> element_paths(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    element_paths[static_cast<std::size_t>(i)] =
        channels.irs_to_dest.col(i) * channels.source_to_irs.row(i);

  const int q = options.grid_q;
  std::vector<Complex> phase_table(static_cast<std::size_t>(q));
  std::vector<double> angle_table(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    angle_table[static_cast<std::size_t>(j)] = wrap_angle(kTwoPi * j / q);
    phase_table[static_cast<std::size_t>(j)] = std::polar(1.0, angle_table[static_cast<std::size_t>(j)]);
  }

  const bool use_rate = options.grid_objective == GridObjective::kSumCapacity;
  std::vector<CMat> partial(static_cast<std::size_t>(n) + 1);
  partial[0] = base;
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  std::vector<int> best_index;
  double best_value = -std::numeric_limits<double>::infinity();

  // Depth-first odometer in lexicographic order (first coordinate most
  // significant); strict improvement keeps the lexicographically smallest
  // maximizer.
  Eigen::Index level = 0;
  while (true) {
    if (index[static_cast<std::size_t>(level)] < q) {
      const int j = index[static_cast<std::size_t>(level)];
      partial[static_cast<std::size_t>(level) + 1] =
          partial[static_cast<std::size_t>(level)] +
          phase_table[static_cast<std::size_t>(j)] * element_paths[static_cast<std::size_t>(level)];
      if (level + 1 == n) {
        const CMat& h_eff = partial[static_cast<std::size_t>(n)];
        const double value = use_rate ? channel_sum_rate(h_eff, snr) : h_eff.squaredNorm();
        if (value > best_value) {
          best_value = value;
          best_index = index;
        }
        ++index[static_cast<std::size_t>(level)];
      } else {
        ++level;
        index[static_cast<std::size_t>(level)] = 0;
      }
    } else {
      if (level == 0) break;
      --level;
      ++index[static_cast<std::size_t>(level)];
    }
  }

  if (best_index.empty())
    throw std::runtime_error("grid_search: objective was not finite at any grid point");

  GridResult result;
  RVec theta(n);
  for (Eigen::Index i = 0; i < n; ++i)
    theta[i] = angle_table[static_cast<std::size_t>(best_index[static_cast<std::size_t>(i)])];
  result.theta = PhaseVector(theta);
  result.objective_value = best_value;
  return result;
}

double tune_ga_step(const ChannelSet& channels, const SolverOptions& options,
                    const std::vector<double>& candidate_steps, const PhaseVector& theta_init) {
  if (candidate_steps.empty())
    throw std::invalid_argument("tune_ga_step: candidate list must not be empty");
  struct Run {
    double step;
    int iters;
    double psi;
  };
  std::vector<Run> converged_runs;
  double smallest = candidate_steps.front();
  for (const double step : candidate_steps) {
    smallest = std::min(smallest, step);
    SolverOptions opts = options;
    opts.ga_step = step;
    const SolveOutcome outcome = ga_solve(channels, opts, theta_init);
    if (outcome.converged)
      converged_runs.push_back({step, outcome.iterations, outcome.psi_trace.back()});
  }
  if (converged_runs.empty()) return smallest;

  // A too-small step can stall within the tolerance after one iteration and
  // look "converged" at the starting objective, so fewest-iterations alone
  // would pick it.  Gate on the objective actually reached first.
  double psi_best = 0.0;
  for (const Run& run : converged_runs) psi_best = std::max(psi_best, run.psi);
  double best_step = 0.0;
  int best_iters = std::numeric_limits<int>::max();
  for (const Run& run : converged_runs) {
    if (run.psi < 0.999 * psi_best) continue;
    if (run.iters < best_iters) {
      best_iters = run.iters;
      best_step = run.step;
    }
  }
  return best_step;
}

}  // namespace irsopt
