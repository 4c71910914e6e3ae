#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ibcsym/types.hpp"

namespace ibcsym {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Counter-based splitter: stream `counter` of master seed `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(master ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

// The helpers below avoid std::*_distribution so that streams are identical
// across standard library implementations.

// Uniform on [0, 1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

// Poisson variate by sequential inversion (adequate for moderate means).
inline std::size_t poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  const double u = uniform01(rng);
  double p = std::exp(-mean);
  double cdf = p;
  std::size_t k = 0;
  while (u >= cdf && k < 100000) {
    ++k;
    p *= mean / static_cast<double>(k);
    cdf += p;
    if (p == 0.0 && cdf < u) break;
  }
  return k;
}

// Standard normal by Box-Muller (one of the pair is discarded).
inline double normal01(Rng& rng) {
  const double u = 1.0 - uniform01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * pi * uniform01(rng));
}

inline Vec3 uniform_direction(Rng& rng) {
  const double mu = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * pi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
  return {s * std::cos(phi), s * std::sin(phi), mu};
}

}  // namespace ibcsym
