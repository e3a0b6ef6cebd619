// SPDX-License-Identifier: Apache-2.0
#include "irsopt/spgm.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace irsopt {

namespace {

std::string shape_of(const CMat& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void check_dimensions(const ChannelSet& channels, const PhaseVector& theta) {
  const auto l = channels.direct.rows();
  const auto k = channels.direct.cols();
  if (channels.irs_to_dest.rows() != l)
    throw std::invalid_argument("effective_channel: irs_to_dest (G) is " + shape_of(channels.irs_to_dest) +
                                " but direct (F) has " + std::to_string(l) + " rows");
  if (channels.source_to_irs.cols() != k)
    throw std::invalid_argument("effective_channel: source_to_irs (H) is " + shape_of(channels.source_to_irs) +
                                " but direct (F) has " + std::to_string(k) + " columns");
  if (channels.irs_to_dest.cols() != channels.source_to_irs.rows())
    throw std::invalid_argument("effective_channel: irs_to_dest (G) has " +
                                std::to_string(channels.irs_to_dest.cols()) +
                                " columns but source_to_irs (H) has " +
                                std::to_string(channels.source_to_irs.rows()) + " rows");
  if (theta.size() != channels.irs_to_dest.cols())
    throw std::invalid_argument("effective_channel: theta has " + std::to_string(theta.size()) +
                                " entries but the IRS has " + std::to_string(channels.irs_to_dest.cols()) +
                                " elements");
}

}  // namespace

CMat effective_channel(const ChannelSet& channels, const PhaseVector& theta) {
  check_dimensions(channels, theta);
  const CVec phi = theta.phasors();
  return channels.direct + channels.irs_to_dest * phi.asDiagonal() * channels.source_to_irs;
}

double spgm_objective(const ChannelSet& channels, const PhaseVector& theta) {
  return effective_channel(channels, theta).squaredNorm();
}

RVec spgm_gradient(const ChannelSet& channels, const PhaseVector& theta) {
  check_dimensions(channels, theta);
  const auto& g = channels.irs_to_dest;
  const auto& h = channels.source_to_irs;
  const CVec phi = theta.phasors();
  const CMat h_eff = channels.direct + g * phi.asDiagonal() * h;
  // Only the diagonal of H (F + G Phi H)^H G is needed.
  const CMat left = h * h_eff.adjoint();  // N x L
  const Eigen::Index n = theta.size();
  RVec grad(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex m_ii = (left.row(i) * g.col(i))(0, 0);
    grad[i] = -2.0 * std::imag(phi[i] * m_ii);
  }
  return grad;
}

SpgmCache::SpgmCache(const ChannelSet& channels) {
  check_dimensions(channels, PhaseVector::Zero(channels.irs_to_dest.cols()));
  const auto& f = channels.direct;
  const auto& g = channels.irs_to_dest;
  const auto& h = channels.source_to_irs;

  const CMat gf = g.adjoint() * f;  // N x K
  direct_diag_ = (gf.array() * h.conjugate().array()).rowwise().sum().matrix();
  reflect_gram_ = g.adjoint() * g;
  forward_gram_ = h * h.adjoint();
  coupling_ = reflect_gram_.cwiseProduct(forward_gram_.transpose());
  direct_power_ = f.squaredNorm();

  const Eigen::Index n = coupling_.rows();
  coordinate_scale_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = std::abs(direct_diag_[i]);
    for (Eigen::Index m = 0; m < n; ++m)
      if (m != i) s += std::abs(coupling_(i, m));
    coordinate_scale_[i] = s;
  }
}

Complex SpgmCache::coordinate_response(const CVec& phasors, Eigen::Index n) const {
  Complex w = direct_diag_[n];
  const Eigen::Index size = coupling_.rows();
  for (Eigen::Index m = 0; m < size; ++m)
    if (m != n) w += phasors[m] * coupling_(n, m);
  return w;
}

double SpgmCache::objective(const CVec& phasors) const {
  // psi = ||F||^2 + 2 Re{sum_n phi_n conj(f_n)} + phi^H C phi.
  const Complex cross = (phasors.array() * direct_diag_.conjugate().array()).sum();
  const Complex quad = phasors.dot(coupling_ * phasors);
  return direct_power_ + 2.0 * std::real(cross) + std::real(quad);
}

RVec SpgmCache::gradient(const CVec& phasors) const {
  CVec w = direct_diag_ + coupling_ * phasors;
  w -= coupling_.diagonal().cwiseProduct(phasors);
  const Eigen::Index n = w.size();
  RVec grad(n);
  for (Eigen::Index i = 0; i < n; ++i)
    grad[i] = -2.0 * std::imag(phasors[i] * std::conj(w[i]));
  return grad;
}

double coordinate_argmax_from_response(Complex response, double scale, double fallback) {
  if (std::abs(response) <= 1e-14 * scale) return fallback;
  return wrap_angle(std::arg(response));
}

double coordinate_argmax(const SpgmCache& cache, const PhaseVector& theta, Eigen::Index n) {
  if (n < 0 || n >= cache.size()) throw std::invalid_argument("coordinate_argmax: index out of range");
  const Complex w = cache.coordinate_response(theta.phasors(), n);
  return coordinate_argmax_from_response(w, cache.coordinate_scale(n), theta[n]);
}

SinusoidParams sinusoid_params(const ChannelSet& channels, const PhaseVector& theta, Eigen::Index n) {
  check_dimensions(channels, theta);
  if (n < 0 || n >= theta.size()) throw std::invalid_argument("sinusoid_params: index out of range");
  const auto& f = channels.direct;
  const auto& g = channels.irs_to_dest;
  const auto& h = channels.source_to_irs;

  // Response computed from the full matrices with the n-th reflection
  // coefficient zeroed out.
  CVec phi = theta.phasors();
  phi[n] = Complex(0.0, 0.0);
  const CMat rest = f + g * phi.asDiagonal() * h;
  const Complex w = (g.col(n).adjoint() * rest * h.row(n).adjoint())(0, 0);
  const Complex z = std::conj(w);

  SinusoidParams params;
  params.amplitude = 2.0 * std::abs(z);
  params.phase = std::arg(z);

  // psi(theta_n) = amplitude * cos(theta_n + phase) + offset peaks at
  // theta_n = -phase; recover the offset there.
  PhaseVector probe = theta;
  probe.set(n, -params.phase);
  params.offset = spgm_objective(channels, probe) - params.amplitude;
  return params;
}

}  // namespace irsopt
