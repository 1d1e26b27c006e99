// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cohtest {

// Counter-based generator built on the splitmix64 finalizer.  Streams are
// derived by key rather than by jumping, so the draw for (seed, purpose,
// realization, band, permutation) is a pure function of those values and
// never depends on thread count or evaluation order.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : state_(mix(seed ^ 0x5851f42d4c957f2dull)) {}

  // Independent child stream; children with distinct keys do not overlap.
  RngStream sub(std::uint64_t key) const {
    RngStream child(0);
    child.state_ = mix(state_ ^ mix(key + 0x632be59bd9b4e019ull));
    return child;
  }

  std::uint64_t u64() { return mix(state_ += 0x9e3779b97f4a7c15ull); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n); rejection sampling keeps it exact.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % n;
    std::uint64_t v = u64();
    while (v >= limit) v = u64();
    return v % n;
  }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Stream keys for the fixed purposes used across the pipelines.
namespace rng_purpose {
inline constexpr std::uint64_t noise = 1;       // additive noise per realization
inline constexpr std::uint64_t driver = 2;      // synthetic driver jitter
inline constexpr std::uint64_t circ = 3;        // circular-shift lags
inline constexpr std::uint64_t phase = 4;       // phase-randomization angles
inline constexpr std::uint64_t target = 5;      // target coherence placement
inline constexpr std::uint64_t subsample = 6;   // benchmark target subsampling
}  // namespace rng_purpose

}  // namespace cohtest
