// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsopt/types.hpp"

namespace irsopt {

/// Composite source->destination channel F + G diag(e^{j theta}) H.
/// Throws std::invalid_argument naming the offending matrix on a
/// dimension mismatch.
CMat effective_channel(const ChannelSet& channels, const PhaseVector& theta);

/// Sum of eigen-channel gains psi(theta) = ||F + G diag(e^{j theta}) H||_F^2.
double spgm_objective(const ChannelSet& channels, const PhaseVector& theta);

/// Analytic gradient of the sum-path-gain objective:
/// entry n = -2 Im{ e^{j theta_n} [H (F + G Phi H)^H G]_{nn} }.
RVec spgm_gradient(const ChannelSet& channels, const PhaseVector& theta);

/// Precomputed quantities the coordinate updates run on.  Holds
/// f_n = [G^H F H^H]_{nn}, the Gram matrices G^H G and H H^H, and their
/// entrywise coupling c_{nm} = [G^H G]_{nm} [H H^H]_{mn}, so that one
/// coordinate update costs O(N-1) multiply-adds and a full objective or
/// gradient evaluation costs O(N^2).
class SpgmCache {
 public:
  explicit SpgmCache(const ChannelSet& channels);

  Eigen::Index size() const { return direct_diag_.size(); }
  const CVec& direct_diag() const { return direct_diag_; }
  const CMat& reflect_gram() const { return reflect_gram_; }
  const CMat& forward_gram() const { return forward_gram_; }

  /// Magnitude scale of the coordinate-n response, used to detect the
  /// degenerate flat-objective case.
  double coordinate_scale(Eigen::Index n) const { return coordinate_scale_[n]; }

  /// w_n = f_n + sum_{m != n} e^{j theta_m} c_{nm}; the optimal theta_n is
  /// its argument.  phasors holds e^{j theta_m} for the current iterate.
  Complex coordinate_response(const CVec& phasors, Eigen::Index n) const;

  /// psi(theta) evaluated from the cached Grams, O(N^2).
  double objective(const CVec& phasors) const;

  /// Gradient of psi from the cached Grams, O(N^2).  Equals
  /// spgm_gradient up to roundoff.
  RVec gradient(const CVec& phasors) const;

 private:
  CVec direct_diag_;       // f_n
  CMat reflect_gram_;      // G^H G
  CMat forward_gram_;      // H H^H
  CMat coupling_;          // c_{nm} = [G^H G]_{nm} [H H^H]_{mn}
  RVec coordinate_scale_;  // |f_n| + sum_{m != n} |c_{nm}|
  double direct_power_ = 0.0;  // ||F||_F^2
};

/// Closed-form per-coordinate maximizer: the angle of the coordinate
/// response w_n, computed from the live Gauss-Seidel iterate (entries
/// below n already updated this sweep, entries above n from the previous
/// one).  If |w_n| vanishes the objective is flat in theta_n and the
/// current value is kept.
double coordinate_argmax(const SpgmCache& cache, const PhaseVector& theta, Eigen::Index n);

/// Same rule applied to a precomputed response; fallback is returned when
/// |response| <= 1e-14 * scale.
double coordinate_argmax_from_response(Complex response, double scale, double fallback);

/// Parameters of the single-coordinate restriction
/// psi(theta_n) = amplitude * cos(theta_n + phase) + offset.
/// Computed from the full matrices, independently of SpgmCache.
struct SinusoidParams {
  double amplitude = 0.0;  // 2 |z_n|, >= 0
  double phase = 0.0;      // angle of z_n
  double offset = 0.0;
};
SinusoidParams sinusoid_params(const ChannelSet& channels, const PhaseVector& theta, Eigen::Index n);

}  // namespace irsopt
