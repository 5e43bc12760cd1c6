#pragma once

// Deterministic random streams for the simulation harness.
//
// Reproducibility contract: a (seed, trial) pair maps to one mt19937_64
// engine via a splitmix64 scramble, uniform doubles come from the top 53 bits
// of one engine output, and exponential draws go through the explicit inverse
// CDF.  None of the implementation-defined std::*_distribution adapters are
// used, so a stored result can be regenerated bit for bit.

#include <cmath>
#include <cstdint>
#include <random>

namespace cwpcn {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Independent substream for one trial; trials can be regenerated in any
// order.
inline std::mt19937_64 make_trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (trial + 1));
  splitmix64_next(s);
  return std::mt19937_64(splitmix64_next(s));
}

// Uniform on [0, 1 - 2^-53]: top 53 bits of one engine step.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exp(1) by inversion; u < 1 strictly, so the log never hits -inf.
inline double exp_unit(std::mt19937_64& rng) {
  return -std::log1p(-uniform01(rng));
}

}  // namespace cwpcn
