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

// Least-squares fit of y_t = beta * x_t + r_t on one complex band column,
// with the residual second-moment summaries needed for the deviance:
//   G = sum |r|^2, Q = sum r^2 (complex square), P = (G^2 - |Q|^2) / G.
// Index 0 is the null model (beta forced to 0), index 1 the full model.
struct GlmFit {
  cdouble beta{0.0, 0.0};
  std::vector<cdouble> residuals_null;
  std::vector<cdouble> residuals_full;
  double g0 = 0.0, g1 = 0.0;
  cdouble q0{0.0, 0.0}, q1{0.0, 0.0};
  double p0 = 0.0, p1 = 0.0;
};

struct GlmTestResult {
  double deviance = 0.0;  // nonnegative
  double p_value = 1.0;   // in (0, 1]
  int df = 2;             // Re(beta), Im(beta)
};

namespace detail {

// (G, Q, P) of a residual vector. P collapses to 0 with G so the improper
// term never produces a negative or NaN power.
inline void residual_moments(std::span<const cdouble> r, double& g, cdouble& q, double& p) {
  g = 0.0;
  q = {0.0, 0.0};
  for (const cdouble& z : r) {
    g += std::norm(z);
    q += z * z;
  }
  p = g > 0.0 ? (g * g - std::norm(q)) / g : 0.0;
}

}  // namespace detail

inline GlmFit fit(std::span<const cdouble> x, std::span<const cdouble> y) {
  if (x.size() != y.size()) throw ShapeMismatch("glm fit: column lengths differ");
  if (x.size() < 3) throw InsufficientData("glm fit: need at least 3 samples");
  double sxx = 0.0;
  cdouble sxy{0.0, 0.0};
  for (std::size_t t = 0; t < x.size(); ++t) {
    sxx += std::norm(x[t]);
    sxy += std::conj(x[t]) * y[t];
  }
  if (sxx == 0.0) throw DegeneratePredictor("glm fit: predictor column is identically zero");
  GlmFit f;
  f.beta = sxy / sxx;
  f.residuals_null.assign(y.begin(), y.end());
  f.residuals_full.resize(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) f.residuals_full[t] = y[t] - f.beta * x[t];
  detail::residual_moments(f.residuals_null, f.g0, f.q0, f.p0);
  detail::residual_moments(f.residuals_full, f.g1, f.q1, f.p1);
  return f;
}

// Likelihood-ratio deviance D = T * [log(G0/G1) + log((P0+eps)/(P1+eps))],
// clamped at 0. A residual energy of exactly 0 is substituted with machine
// epsilon so a perfect fit yields a finite, large deviance.
inline double deviance(const GlmFit& f, std::size_t t_len) {
  if (t_len != f.residuals_full.size())
    throw ShapeMismatch("glm deviance: sample count does not match the fit");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double g0 = f.g0 > 0.0 ? f.g0 : eps;
  const double g1 = f.g1 > 0.0 ? f.g1 : eps;
  const double t = static_cast<double>(t_len);
  const double d = t * (std::log(g0 / g1) + std::log((f.p0 + eps) / (f.p1 + eps)));
  return std::max(d, 0.0);
}

// p = exp(-D/2): chi-squared survival with df = 2, evaluated in closed form.
inline GlmTestResult glm_pvalue(std::span<const cdouble> x, std::span<const cdouble> y) {
  GlmFit f = fit(x, y);
  GlmTestResult r;
  r.deviance = deviance(f, x.size());
  r.p_value = std::exp(-0.5 * r.deviance);
  return r;
}

// Column-wise test over all bands of a pair of band representations.
inline std::vector<GlmTestResult> glm_spectrum(const BandRep& x, const BandRep& y) {
  if (!x.same_shape(y)) throw ShapeMismatch("glm_spectrum: band representations differ in shape");
  std::vector<GlmTestResult> out;
  out.reserve(x.bands());
  for (std::size_t k = 0; k < x.bands(); ++k) out.push_back(glm_pvalue(x.column(k), y.column(k)));
  return out;
}

}  // namespace cohtest
