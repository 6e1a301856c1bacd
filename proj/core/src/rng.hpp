// Copyright 2026 the xden developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace xden::detail {

// splitmix64: tiny, seedable, and stable across platforms. Every pixel gets
// its own stream derived from (user seed, view, pixel), so sample counts in
// one pixel never shift another pixel's draws.
struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 s{a ^ (0x9e3779b97f4a7c15ull + ((b << 6) | (b >> 58)))};
  return s.next();
}

// ln(k!) without touching the C library's signgam global.
inline double log_factorial(std::uint64_t k) {
  if (k < 16) {
    double acc = 0.0;
    for (std::uint64_t i = 2; i <= k; ++i) acc += std::log(static_cast<double>(i));
    return acc;
  }
  // Stirling series for ln Gamma(x), x = k+1 >= 17.
  const double x = static_cast<double>(k) + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12 - inv2 * (1.0 / 360 - inv2 * (1.0 / 1260 - inv2 / 1680)));
  constexpr double half_log_two_pi = 0.91893853320467274178;
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

// Poisson draw. Inversion below lambda = 30, Hormann's transformed rejection
// (PTRS) above it. Self-contained so any two builds agree byte for byte.
inline std::uint64_t poisson_sample(double lambda, SplitMix64& rng) {
  if (!(lambda > 0.0)) return 0;
  if (lambda < 30.0) {
    const double p0 = std::exp(-lambda);
    double p = p0;
    double cdf = p0;
    const double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > cdf && k < 2000) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    if (lhs <= kf * loglam - lambda - log_factorial(k)) return k;
  }
}

}  // namespace xden::detail
