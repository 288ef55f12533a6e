#include "coldnav/random.hpp"

#include <algorithm>
#include <cmath>

#include "coldnav/constants.hpp"

namespace coldnav::rng {

double normal(Engine& eng) {
  const double u1 = uniform01_open_zero(eng);
  const double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(constants::two_pi * u2);
}

namespace {

// Inverse-CDF walk; only used when n*q is small so the loop stays short.
long long binomial_inversion(Engine& eng, long long n, double q) {
  const double log1mq = std::log1p(-q);
  double pmf = std::exp(static_cast<double>(n) * log1mq);  // P(k = 0)
  double u = uniform01(eng);
  long long k = 0;
  const double ratio = q / (1.0 - q);
  while (u > pmf && k < n) {
    u -= pmf;
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

long long binomial_bernoulli(Engine& eng, long long n, double q) {
  long long k = 0;
  for (long long i = 0; i < n; ++i) {
    if (uniform01(eng) < q) ++k;
  }
  return k;
}

}  // namespace

long long binomial(Engine& eng, long long n, double p) {
  if (n <= 0) return 0;
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;

  const bool flipped = p > 0.5;
  const double q = flipped ? 1.0 - p : p;

  long long k;
  if (n <= 64) {
    k = binomial_bernoulli(eng, n, q);
  } else if (static_cast<double>(n) * q <= 30.0) {
    k = binomial_inversion(eng, n, q);
  } else {
    const double mean = static_cast<double>(n) * q;
    const double sd = std::sqrt(mean * (1.0 - q));
    const double draw = mean + sd * normal(eng);
    k = std::clamp(static_cast<long long>(std::llround(draw)), 0LL, n);
  }
  return flipped ? n - k : k;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t word1, std::uint64_t word2) {
  auto finalize = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = finalize(seed);
  h = finalize(h ^ word1);
  h = finalize(h ^ word2);
  return h;
}

}  // namespace coldnav::rng
