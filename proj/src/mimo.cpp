// SPDX-License-Identifier: Apache-2.0
#include "irsopt/mimo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "irsopt/spgm.hpp"

namespace irsopt {

namespace {

Eigen::Index count_streams(const RVec& singular_values, Eigen::Index rows, Eigen::Index cols) {
  if (singular_values.size() == 0) return 0;
  const double cutoff = rank_tolerance(rows, cols) * singular_values[0];
  Eigen::Index u = 0;
  while (u < singular_values.size() && singular_values[u] > cutoff) ++u;
  return u;
}

}  // namespace

EigenDecomposition svd_decompose(const CMat& h_eff) {
  if (!h_eff.allFinite()) throw std::invalid_argument("svd_decompose: matrix has non-finite entries");
  Eigen::JacobiSVD<CMat> svd(h_eff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success)
    throw std::runtime_error("svd_decompose: decomposition did not converge");
  EigenDecomposition decomp;
  decomp.left_basis = svd.matrixU();
  decomp.singular_values = svd.singularValues();
  decomp.right_basis = svd.matrixV();
  decomp.num_streams = count_streams(decomp.singular_values, h_eff.rows(), h_eff.cols());
  return decomp;
}

RVec singular_values_squared(const CMat& h_eff) {
  const Eigen::Index d = std::min(h_eff.rows(), h_eff.cols());
  if (d == 1) {
    RVec v(1);
    v[0] = h_eff.squaredNorm();
    return v;
  }
  const CMat gram = (h_eff.rows() <= h_eff.cols()) ? CMat(h_eff * h_eff.adjoint())
                                                   : CMat(h_eff.adjoint() * h_eff);
  if (d == 2) {
    const double tr = std::real(gram(0, 0) + gram(1, 1));
    const double det = std::real(gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0));
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    RVec v(2);
    v[0] = 0.5 * (tr + disc);
    v[1] = std::max(0.5 * (tr - disc), 0.0);
    return v;
  }
  Eigen::SelfAdjointEigenSolver<CMat> eig(gram, Eigen::EigenvaluesOnly);
  RVec v = eig.eigenvalues().reverse();  // ascending -> descending
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::max(v[i], 0.0);
  return v;
}

WaterAllocation water_filling(const RVec& singular_values, double snr, Eigen::Index num_streams) {
  if (!(snr > 0.0)) throw std::invalid_argument("water_filling: snr must be > 0");
  if (num_streams < 0 || num_streams > singular_values.size())
    throw std::invalid_argument("water_filling: num_streams out of range");
  WaterAllocation alloc;
  if (num_streams == 0) {
    alloc.powers = RVec();
    return alloc;
  }
  const double total = static_cast<double>(num_streams);
  RVec floor(num_streams);  // inverse channel quality U / (snr * lambda_u^2)
  for (Eigen::Index u = 0; u < num_streams; ++u) {
    const double lam = singular_values[u];
    if (!(lam > 0.0)) throw std::invalid_argument("water_filling: active singular values must be > 0");
    if (u > 0 && lam > singular_values[u - 1] + 1e-12 * singular_values[u - 1])
      throw std::invalid_argument("water_filling: singular values must be sorted descending");
    floor[u] = total / (snr * lam * lam);
  }

  // Activate the top k streams; the largest k with all active powers
  // positive satisfies the KKT conditions.
  double eta = 0.0;
  Eigen::Index active = 0;
  double floor_sum = 0.0;
  for (Eigen::Index k = 0; k < num_streams; ++k) floor_sum += floor[k];
  for (Eigen::Index k = num_streams; k >= 1; --k) {
    eta = (total + floor_sum) / static_cast<double>(k);
    if (eta - floor[k - 1] > 0.0) {  // smallest active power
      active = k;
      break;
    }
    floor_sum -= floor[k - 1];
  }

  alloc.water_level = eta;
  alloc.powers = RVec::Zero(num_streams);
  for (Eigen::Index u = 0; u < active; ++u) alloc.powers[u] = eta - floor[u];
  return alloc;
}

double sum_capacity(const EigenDecomposition& decomp, const RVec& powers, double snr) {
  const Eigen::Index u_count = decomp.num_streams;
  if (powers.size() != u_count)
    throw std::invalid_argument("sum_capacity: powers length must equal num_streams");
  if (u_count == 0) return 0.0;
  const double total = static_cast<double>(u_count);
  double rate = 0.0;
  for (Eigen::Index u = 0; u < u_count; ++u) {
    const double lam = decomp.singular_values[u];
    rate += std::log2(1.0 + snr * powers[u] * lam * lam / total);
  }
  return rate;
}

double channel_sum_rate(const CMat& h_eff, double snr) {
  const RVec gains = singular_values_squared(h_eff);
  const double tol = rank_tolerance(h_eff.rows(), h_eff.cols());
  const double cutoff = tol * tol * gains[0];
  Eigen::Index u_count = 0;
  while (u_count < gains.size() && gains[u_count] > cutoff) ++u_count;
  if (u_count == 0) return 0.0;

  RVec lambdas(u_count);
  for (Eigen::Index u = 0; u < u_count; ++u) lambdas[u] = std::sqrt(gains[u]);
  const WaterAllocation alloc = water_filling(lambdas, snr, u_count);
  const double total = static_cast<double>(u_count);
  double rate = 0.0;
  for (Eigen::Index u = 0; u < u_count; ++u)
    rate += std::log2(1.0 + snr * alloc.powers[u] * gains[u] / total);
  return rate;
}

RateResult end_to_end_rate(const ChannelSet& channels, const PhaseVector& theta, double snr) {
  if (!(snr > 0.0)) throw std::invalid_argument("end_to_end_rate: snr must be > 0");
  const CMat h_eff = effective_channel(channels, theta);
  const EigenDecomposition decomp = svd_decompose(h_eff);
  const WaterAllocation alloc = water_filling(decomp.singular_values, snr, decomp.num_streams);

  RateResult result;
  result.powers = alloc.powers;
  result.water_level = alloc.water_level;
  result.per_stream_rate = RVec::Zero(decomp.num_streams);
  const double total = static_cast<double>(decomp.num_streams);
  for (Eigen::Index u = 0; u < decomp.num_streams; ++u) {
    const double lam = decomp.singular_values[u];
    result.per_stream_rate[u] = std::log2(1.0 + snr * alloc.powers[u] * lam * lam / total);
  }
  result.sum_rate = sum_capacity(decomp, alloc.powers, snr);
  return result;
}

}  // namespace irsopt
