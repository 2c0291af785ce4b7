#pragma once

#include <cmath>
#include <cstdint>

namespace adamd::rng {

// Counter-based generator: every draw is a pure function of its key words,
// so gradient noise is reproducible regardless of evaluation order.
// splitmix64 finalizer (Steele, Lea, Flood 2014 public-domain constants).
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2,
                                  std::uint64_t k3 = 0) noexcept {
  std::uint64_t h = splitmix64(k0);
  h = splitmix64(h ^ k1);
  h = splitmix64(h ^ k2);
  h = splitmix64(h ^ k3);
  return h;
}

// Two-word mixer used to derive per-step seeds from a base seed.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(a ^ splitmix64(b));
}

// Top 53 bits -> [0, 1).
inline double uniform01(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Top 53 bits -> (0, 1]; safe as a log argument.
inline double uniform01_open(std::uint64_t bits) noexcept {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

// Standard normal draw keyed by (k0, k1, k2): Box-Muller, cosine branch,
// u1 in (0,1] from salt 0 and u2 in [0,1) from salt 1. This transform is
// frozen; traces produced with it are stable across releases.
inline double gaussian(std::uint64_t k0, std::uint64_t k1, std::uint64_t k2) noexcept {
  const double u1 = uniform01_open(counter_hash(k0, k1, k2, 0));
  const double u2 = uniform01(counter_hash(k0, k1, k2, 1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace adamd::rng
