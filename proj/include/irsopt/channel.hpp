// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsopt/rng.hpp"
#include "irsopt/types.hpp"

namespace irsopt {

/// Steering vector of a half-wavelength uniform linear array:
/// entry k = exp(j * pi * k * sin(angle)), k = 0 .. num_elements-1.
CVec ula_steering(int num_elements, double angle);

/// i.i.d. circularly-symmetric complex Gaussian matrix, zero mean,
/// unit variance per entry (variance 1/2 per real dimension).
CMat gen_rayleigh(int rows, int cols, Rng& rng);

/// Rician fading matrix with unit average entry power:
///   sqrt(beta/(1+beta)) * a_rx(aoa) a_tx(aod)^H + sqrt(1/(1+beta)) * W,
/// W i.i.d. CN(0, 1).  beta = 0 degenerates to Rayleigh, beta -> inf to
/// the rank-1 LOS outer product.
CMat gen_rician(int rows, int cols, double beta, double aoa, double aod, Rng& rng);

/// Draws the full channel set for one realization: F Rayleigh, G and H
/// Rician with LOS angles uniform in [-pi/2, pi/2].  Deterministic in the
/// RNG state; matrices are filled in a fixed order.
ChannelSet gen_channel_set(const SystemConfig& config, Rng& rng);

}  // namespace irsopt
