// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace irsopt {

using Rng = std::mt19937_64;

/// splitmix64 step; advances the state and returns the next word.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives a sub-seed from a master seed and a structured index path
/// (e.g. {N, snr_bits, trial}).  Trials seeded this way are reproducible
/// independently of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = master;
  std::uint64_t mixed = splitmix64(state);
  for (std::uint64_t index : path) {
    state = mixed ^ index;
    mixed = splitmix64(state);
  }
  return mixed;
}

/// Bit pattern of a double, for hashing real-valued grid coordinates.
inline std::uint64_t bits_of(double v) { return std::bit_cast<std::uint64_t>(v); }

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace irsopt
