// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irsopt {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Maps an angle to its canonical representative in [0, 2*pi).
inline double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;  // fmod + add can round up to exactly 2*pi
  return w;
}

/// Link-level parameters: antenna counts, IRS size, SNR and fading model.
struct SystemConfig {
  int source_antennas = 1;    // K
  int dest_antennas = 1;      // L
  int irs_elements = 1;       // N
  double snr = 1.0;           // P / sigma^2, linear
  double rician_beta = 10.0;  // LOS-to-NLOS power ratio, linear
  std::uint64_t seed = 0;

  void validate() const {
    if (source_antennas < 1) throw std::invalid_argument("SystemConfig: source_antennas must be >= 1");
    if (dest_antennas < 1) throw std::invalid_argument("SystemConfig: dest_antennas must be >= 1");
    if (irs_elements < 1) throw std::invalid_argument("SystemConfig: irs_elements must be >= 1");
    if (!(snr > 0.0)) throw std::invalid_argument("SystemConfig: snr must be > 0");
    if (!(rician_beta >= 0.0)) throw std::invalid_argument("SystemConfig: rician_beta must be >= 0");
  }
};

/// The three channel matrices of the link.
///
/// direct        F : L x K, source -> destination
/// irs_to_dest   G : L x N
/// source_to_irs H : N x K
struct ChannelSet {
  CMat direct;
  CMat irs_to_dest;
  CMat source_to_irs;

  Eigen::Index dest_antennas() const { return direct.rows(); }
  Eigen::Index source_antennas() const { return direct.cols(); }
  Eigen::Index irs_elements() const { return irs_to_dest.cols(); }
};

/// IRS phase shifts, stored canonically in [0, 2*pi).
class PhaseVector {
 public:
  PhaseVector() = default;

  explicit PhaseVector(RVec raw) : theta_(std::move(raw)) {
    for (Eigen::Index i = 0; i < theta_.size(); ++i) {
      if (!std::isfinite(theta_[i]))
        throw std::invalid_argument("PhaseVector: entry " + std::to_string(i) + " is not finite");
      theta_[i] = wrap_angle(theta_[i]);
    }
  }

  static PhaseVector Zero(Eigen::Index n) { return PhaseVector(RVec::Zero(n)); }

  Eigen::Index size() const { return theta_.size(); }
  double operator[](Eigen::Index i) const { return theta_[i]; }
  const RVec& values() const { return theta_; }

  void set(Eigen::Index i, double value) {
    if (!std::isfinite(value))
      throw std::invalid_argument("PhaseVector: assigned value is not finite");
    theta_[i] = wrap_angle(value);
  }

  /// Unit-modulus reflection coefficients e^{j theta_n}.
  CVec phasors() const {
    CVec phi(theta_.size());
    for (Eigen::Index i = 0; i < theta_.size(); ++i)
      phi[i] = std::polar(1.0, theta_[i]);
    return phi;
  }

 private:
  RVec theta_;
};

}  // namespace irsopt
