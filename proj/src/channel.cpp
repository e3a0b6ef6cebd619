// SPDX-License-Identifier: Apache-2.0
#include "irsopt/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace irsopt {

namespace {

// Fills in column-major order so draw order is independent of expression
// evaluation details.
CMat draw_cn01(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m(r, c) = Complex(re, im);
    }
  return m;
}

}  // namespace

CVec ula_steering(int num_elements, double angle) {
  if (num_elements < 1) throw std::invalid_argument("ula_steering: num_elements must be >= 1");
  CVec a(num_elements);
  const double spatial_freq = std::numbers::pi * std::sin(angle);
  for (int k = 0; k < num_elements; ++k)
    a[k] = std::polar(1.0, spatial_freq * k);
  return a;
}

CMat gen_rayleigh(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("gen_rayleigh: dimensions must be >= 1");
  return draw_cn01(rows, cols, rng);
}

CMat gen_rician(int rows, int cols, double beta, double aoa, double aod, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("gen_rician: dimensions must be >= 1");
  if (!(beta >= 0.0)) throw std::invalid_argument("gen_rician: beta must be >= 0");
  const CVec a_rx = ula_steering(rows, aoa);
  const CVec a_tx = ula_steering(cols, aod);
  const double los_gain = std::sqrt(beta / (1.0 + beta));
  const double nlos_gain = std::sqrt(1.0 / (1.0 + beta));
  return los_gain * (a_rx * a_tx.adjoint()) + nlos_gain * draw_cn01(rows, cols, rng);
}

ChannelSet gen_channel_set(const SystemConfig& config, Rng& rng) {
  config.validate();
  const int k = config.source_antennas;
  const int l = config.dest_antennas;
  const int n = config.irs_elements;

  ChannelSet channels;
  channels.direct = gen_rayleigh(l, k, rng);

  std::uniform_real_distribution<double> half_circle(-std::numbers::pi / 2.0, std::numbers::pi / 2.0);
  const double g_aoa = half_circle(rng);
  const double g_aod = half_circle(rng);
  channels.irs_to_dest = gen_rician(l, n, config.rician_beta, g_aoa, g_aod, rng);

  const double h_aoa = half_circle(rng);
  const double h_aod = half_circle(rng);
  channels.source_to_irs = gen_rician(n, k, config.rician_beta, h_aoa, h_aod, rng);
  return channels;
}

}  // namespace irsopt
