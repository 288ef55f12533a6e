#pragma once

#include <cstdint>
#include <random>

// Deterministic sampling helpers. All draws go through mt19937_64 plus
// arithmetic we own, so a fixed seed reproduces bit-identical streams on any
// platform (std::*_distribution is implementation-defined and avoided).

namespace coldnav::rng {

using Engine = std::mt19937_64;

// Uniform on [0, 1) with 53-bit resolution.
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe as a log() argument.
inline double uniform01_open_zero(Engine& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

inline double uniform(Engine& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

// Standard normal via Box-Muller (no cached spare; two uniforms per draw).
double normal(Engine& eng);

// Binomial(n, p) draw. Exact Bernoulli / inversion sampling for small n or
// skewed p, Gaussian approximation with continuity correction once
// n*min(p,1-p) is large enough that the approximation error is far below
// shot noise. p outside [0,1] is clamped.
long long binomial(Engine& eng, long long n, double p);

// Mixes words into a sub-stream seed (splitmix64 finalizer per word).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word1, std::uint64_t word2 = 0);

}  // namespace coldnav::rng
