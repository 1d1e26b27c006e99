// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "cohtest/errors.hpp"
#include "cohtest/fft.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

// Per-band coherence amplitude between two band representations.
struct CoherenceSpectrum {
  std::vector<double> values;           // one entry per band, in [0, 1]
  std::vector<double> band_centers_hz;  // copied from the inputs
  double eps_used = 0.0;                // degeneracy guard applied to the denominator
};

// Coherence amplitude of two complex coefficient columns:
//   |sum_t x_t * conj(y_t)| / max(sqrt(sum|x|^2 * sum|y|^2), eps).
// The eps guard only matters for (near-)zero columns; values are bounded by
// Cauchy-Schwarz, never clipped.
inline double coherence_cols(std::span<const cdouble> x, std::span<const cdouble> y,
                             double eps = std::numeric_limits<double>::epsilon()) {
  if (x.size() != y.size()) throw ShapeMismatch("coherence: column lengths differ");
  cdouble cross{0.0, 0.0};
  double px = 0.0;
  double py = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    cross += x[t] * std::conj(y[t]);
    px += std::norm(x[t]);
    py += std::norm(y[t]);
  }
  return std::abs(cross) / std::max(std::sqrt(px * py), eps);
}

inline CoherenceSpectrum coherence(const BandRep& x, const BandRep& y,
                                   double eps = std::numeric_limits<double>::epsilon()) {
  if (!x.same_shape(y)) throw ShapeMismatch("coherence: band representations differ in shape");
  CoherenceSpectrum out;
  out.band_centers_hz = x.centers_hz();
  out.eps_used = eps;
  out.values.reserve(x.bands());
  for (std::size_t k = 0; k < x.bands(); ++k)
    out.values.push_back(coherence_cols(x.column(k), y.column(k), eps));
  return out;
}

// Coherence at a single band; throws BadIndex when band is out of range.
inline double coherence_at(const BandRep& x, const BandRep& y, std::size_t band,
                           double eps = std::numeric_limits<double>::epsilon()) {
  if (!x.same_shape(y)) throw ShapeMismatch("coherence_at: band representations differ in shape");
  return coherence_cols(x.column(band), y.column(band), eps);
}

}  // namespace cohtest
