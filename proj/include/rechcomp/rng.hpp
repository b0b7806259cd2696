#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace rechcomp {

// splitmix64 finalizer; good avalanche, used to derive independent streams
// from structured coordinates (seed, method, slot count, snr index, trial).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p));
  return h;
}

inline std::mt19937_64 make_engine(std::initializer_list<std::uint64_t> parts) {
  return std::mt19937_64(derive_stream(parts));
}

// Uniform double in [0, 1) built from the top 53 bits of the engine output.
// Self-contained so streams do not depend on the standard library's
// distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller.  E[z] = 0, E[|z|^2] = 1 (0.5 per real component), so a complex
// noise sample with total variance sigma^2 is sigma * standard_complex_normal.
inline std::complex<double> standard_complex_normal(std::mt19937_64& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  // guard against log(0)
  double r = std::sqrt(-std::log1p(-u1));
  double phi = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

// One real standard normal (unit variance); draws one complex sample and
// keeps the real part scaled up, so successive calls stay independent.
inline double standard_normal(std::mt19937_64& rng) {
  return standard_complex_normal(rng).real() * 1.4142135623730951;
}

}  // namespace rechcomp
