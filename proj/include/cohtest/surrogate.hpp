// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "cohtest/coherence.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

enum class SurrogateMethod { circular_shift, phase_randomize };

struct SurrogateConfig {
  SurrogateMethod method = SurrogateMethod::circular_shift;
  std::size_t n_perm = 2000;  // at least 1
  std::uint64_t seed = 0;
  // true: p = (1 + count) / (n_perm + 1), which counts the identity
  // permutation and keeps p at or above the resolution floor.
  // false: p = count / n_perm (can reach exactly 0).
  bool add_one = true;

  void validate() const {
    if (n_perm < 1) throw ConfigError("surrogate: n_perm must be at least 1");
  }
};

struct SurrogateTestResult {
  double observed = 0.0;             // coherence of the unshuffled pair
  std::vector<double> null_samples;  // n_perm surrogate coherences, each in [0, 1]
  double p_value = 1.0;
  double floor = 0.0;                // 1 / (n_perm + 1)
};

// Rotate every column by `lag`: row t of the output is row (t + lag) mod T
// of the input. lag must be in [0, T).
inline BandRep circ_shift(const BandRep& ax, std::size_t lag) {
  const std::size_t t_len = ax.rows();
  if (lag >= t_len) throw BadLag("circ_shift: lag must be less than the row count");
  BandRep out(t_len, ax.centers_hz(), ax.dt_s());
  for (std::size_t k = 0; k < ax.bands(); ++k) {
    auto src = ax.column(k);
    auto dst = out.column(k);
    for (std::size_t t = 0; t < t_len; ++t) dst[t] = src[(t + lag) % t_len];
  }
  return out;
}

// Multiply every cell by an independent unit phasor e^{i*theta},
// theta ~ Unif[0, 2*pi). Draw order is band-major (band outer, row inner),
// so a given stream state maps to one definite surrogate.
inline BandRep phase_randomize(const BandRep& ax, RngStream& rng) {
  BandRep out(ax.rows(), ax.centers_hz(), ax.dt_s());
  for (std::size_t k = 0; k < ax.bands(); ++k) {
    auto src = ax.column(k);
    auto dst = out.column(k);
    for (std::size_t t = 0; t < ax.rows(); ++t) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      dst[t] = src[t] * cdouble(std::cos(theta), std::sin(theta));
    }
  }
  return out;
}

namespace detail {

// Stream for one (band, permutation) cell of a surrogate test. Permutation
// indices are 1-based here so band-level keys stay distinct from cell keys.
inline RngStream surrogate_stream(const SurrogateConfig& cfg, std::size_t band,
                                  std::size_t perm) {
  const std::uint64_t purpose = cfg.method == SurrogateMethod::circular_shift
                                    ? rng_purpose::circ
                                    : rng_purpose::phase;
  return RngStream(cfg.seed).sub(purpose).sub(band).sub(perm + 1);
}

// Surrogate coherence without materializing the shifted/rotated column:
// column energies are permutation-invariant, so only the cross term moves.
inline double surrogate_coherence(std::span<const cdouble> x, std::span<const cdouble> y,
                                  double denom, const SurrogateConfig& cfg, RngStream& rng) {
  const std::size_t t_len = x.size();
  cdouble cross{0.0, 0.0};
  if (cfg.method == SurrogateMethod::circular_shift) {
    const std::size_t lag = 1 + static_cast<std::size_t>(rng.below(t_len - 1));
    for (std::size_t t = 0; t < t_len; ++t) cross += x[(t + lag) % t_len] * std::conj(y[t]);
  } else {
    for (std::size_t t = 0; t < t_len; ++t) {
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      cross += x[t] * cdouble(std::cos(theta), std::sin(theta)) * std::conj(y[t]);
    }
  }
  return std::abs(cross) / denom;
}

}  // namespace detail

// One-band surrogate test: ay is held fixed, ax is resampled n_perm times,
// and p is the fraction of surrogate coherences at or above the observed one.
// Each (band, permutation) cell draws from its own substream, so results do
// not depend on evaluation order or thread count.
inline SurrogateTestResult surrogate_pvalue(const BandRep& ax, const BandRep& ay,
                                            std::size_t band, const SurrogateConfig& cfg) {
  if (!ax.same_shape(ay)) throw ShapeMismatch("surrogate: band representations differ in shape");
  cfg.validate();
  auto x = ax.column(band);
  auto y = ay.column(band);
  const std::size_t t_len = x.size();
  if (t_len < 2) throw InsufficientData("surrogate: need at least 2 rows");

  double px = 0.0, py = 0.0;
  cdouble cross{0.0, 0.0};
  for (std::size_t t = 0; t < t_len; ++t) {
    cross += x[t] * std::conj(y[t]);
    px += std::norm(x[t]);
    py += std::norm(y[t]);
  }
  const double denom = std::max(std::sqrt(px * py), std::numeric_limits<double>::epsilon());

  SurrogateTestResult res;
  res.observed = std::abs(cross) / denom;
  res.floor = 1.0 / static_cast<double>(cfg.n_perm + 1);
  res.null_samples.resize(cfg.n_perm);
  std::size_t count = 0;
  for (std::size_t p = 0; p < cfg.n_perm; ++p) {
    RngStream rng = detail::surrogate_stream(cfg, band, p);
    const double c = detail::surrogate_coherence(x, y, denom, cfg, rng);
    res.null_samples[p] = c;
    if (res.observed <= c) ++count;
  }
  res.p_value = cfg.add_one
                    ? static_cast<double>(1 + count) / static_cast<double>(cfg.n_perm + 1)
                    : static_cast<double>(count) / static_cast<double>(cfg.n_perm);
  return res;
}

// Surrogate test on every band; band k consumes only its own substreams.
inline std::vector<SurrogateTestResult> surrogate_spectrum(const BandRep& ax, const BandRep& ay,
                                                           const SurrogateConfig& cfg) {
  if (!ax.same_shape(ay)) throw ShapeMismatch("surrogate: band representations differ in shape");
  std::vector<SurrogateTestResult> out;
  out.reserve(ax.bands());
  for (std::size_t k = 0; k < ax.bands(); ++k) out.push_back(surrogate_pvalue(ax, ay, k, cfg));
  return out;
}

}  // namespace cohtest
