// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsopt/types.hpp"

namespace irsopt {

/// Full SVD of the effective channel plus its numerical rank.
struct EigenDecomposition {
  CMat left_basis;        // U, L x L unitary
  RVec singular_values;   // descending, length min(L, K)
  CMat right_basis;       // V, K x K unitary
  Eigen::Index num_streams = 0;  // count of singular values above rank_tol * largest
};

/// Numerical-rank tolerance relative to the largest singular value.
inline double rank_tolerance(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

EigenDecomposition svd_decompose(const CMat& h_eff);

/// Squared singular values of h_eff in descending order, computed from the
/// smaller Gram matrix; closed form up to 2x2, eigensolver beyond.
RVec singular_values_squared(const CMat& h_eff);

struct WaterAllocation {
  RVec powers;              // length num_streams, >= 0, sums to num_streams
  double water_level = 0.0; // eta
};

/// Water-filling over the top num_streams eigen-channels:
/// p_u = max(eta - U / (snr * lambda_u^2), 0) with eta set so that
/// sum p_u = U.  Solved by the sorted active-set closed form.
WaterAllocation water_filling(const RVec& singular_values, double snr, Eigen::Index num_streams);

/// Sum rate of the parallel eigen-channels,
/// sum_u log2(1 + snr * p_u * lambda_u^2 / U) in bits/s/Hz.
double sum_capacity(const EigenDecomposition& decomp, const RVec& powers, double snr);

/// Capacity of an effective channel without forming the SVD bases; used
/// where only the rate is needed (grid search, baselines).
double channel_sum_rate(const CMat& h_eff, double snr);

struct RateResult {
  RVec powers;
  RVec per_stream_rate;
  double sum_rate = 0.0;
  double water_level = 0.0;
};

/// effective_channel -> svd_decompose -> water_filling -> sum_capacity.
RateResult end_to_end_rate(const ChannelSet& channels, const PhaseVector& theta, double snr);

}  // namespace irsopt
