// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "cohtest/errors.hpp"
#include "cohtest/fft.hpp"
#include "cohtest/sweep.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

// Detection thresholds of one method. Levels that are never reached are NaN.
struct MethodThresholds {
  double c50 = std::numeric_limits<double>::quiet_NaN();
  double c80 = std::numeric_limits<double>::quiet_NaN();
  double c90 = std::numeric_limits<double>::quiet_NaN();
  double snr_at_80_db = std::numeric_limits<double>::quiet_NaN();
};

struct PowerCurve {
  double alpha = 0.05;
  double bin_width = 0.025;
  std::vector<double> bin_centers;       // nonempty bins only, ascending
  std::vector<std::size_t> bin_counts;
  std::vector<double> rate_glm, rate_circ, rate_phase;
  MethodThresholds glm, circ, phase;
};

namespace detail {

// First bin where the rate reaches `level`, linearly interpolated between
// bin centers; the rate in the first bin already qualifying maps to its
// center. Returns {threshold, crossing bin} or NaN/npos when never reached.
inline std::pair<double, std::size_t> first_crossing(std::span<const double> centers,
                                                     std::span<const double> rates,
                                                     double level) {
  for (std::size_t j = 0; j < rates.size(); ++j) {
    if (rates[j] >= level) {
      if (j == 0) return {centers[0], 0};
      const double r0 = rates[j - 1], r1 = rates[j];
      const double c = centers[j - 1] + (level - r0) * (centers[j] - centers[j - 1]) / (r1 - r0);
      return {c, j};
    }
  }
  return {std::numeric_limits<double>::quiet_NaN(), static_cast<std::size_t>(-1)};
}

}  // namespace detail

// Binned detection-rate curves over the sweep, plus threshold extractions.
// Records are binned by observed coherence (by_true switches to the target
// value); detection means p <= alpha.
inline PowerCurve power_curve(std::span<const SweepRecord> records, double alpha = 0.05,
                              double bin_width = 0.025, bool by_true = false) {
  if (records.empty()) throw EmptyInput("power_curve: no records");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("power_curve: alpha must be in (0, 1)");
  if (!(bin_width > 0.0) || bin_width > 1.0)
    throw ConfigError("power_curve: bin_width must be in (0, 1]");

  const std::size_t n_bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width));
  std::vector<std::size_t> counts(n_bins, 0);
  std::vector<double> hit_glm(n_bins, 0.0), hit_circ(n_bins, 0.0), hit_phase(n_bins, 0.0);
  std::vector<double> snr_sum(n_bins, 0.0);
  for (const SweepRecord& r : records) {
    const double axis = by_true ? r.c_true : r.c_obs;
    const double clipped = std::clamp(axis, 0.0, std::nextafter(1.0, 0.0));
    const std::size_t j = std::min(static_cast<std::size_t>(clipped / bin_width), n_bins - 1);
    ++counts[j];
    snr_sum[j] += r.snr_db;
    if (r.p_glm <= alpha) hit_glm[j] += 1.0;
    if (r.p_circ <= alpha) hit_circ[j] += 1.0;
    if (r.p_phase <= alpha) hit_phase[j] += 1.0;
  }

  PowerCurve pc;
  pc.alpha = alpha;
  pc.bin_width = bin_width;
  std::vector<double> snr_mean;
  for (std::size_t j = 0; j < n_bins; ++j) {
    if (counts[j] == 0) continue;
    const double n = static_cast<double>(counts[j]);
    pc.bin_centers.push_back((static_cast<double>(j) + 0.5) * bin_width);
    pc.bin_counts.push_back(counts[j]);
    pc.rate_glm.push_back(hit_glm[j] / n);
    pc.rate_circ.push_back(hit_circ[j] / n);
    pc.rate_phase.push_back(hit_phase[j] / n);
    snr_mean.push_back(snr_sum[j] / n);
  }
  if (pc.bin_centers.size() < 2)
    throw InsufficientData("power_curve: need at least 2 nonempty bins");

  auto extract = [&](std::span<const double> rates) {
    MethodThresholds th;
    th.c50 = detail::first_crossing(pc.bin_centers, rates, 0.5).first;
    auto [c80, j80] = detail::first_crossing(pc.bin_centers, rates, 0.8);
    th.c80 = c80;
    if (j80 != static_cast<std::size_t>(-1)) th.snr_at_80_db = snr_mean[j80];
    th.c90 = detail::first_crossing(pc.bin_centers, rates, 0.9).first;
    return th;
  };
  pc.glm = extract(pc.rate_glm);
  pc.circ = extract(pc.rate_circ);
  pc.phase = extract(pc.rate_phase);
  return pc;
}

struct RocCurve {
  std::vector<double> fpr, tpr;  // from (0,0) to (1,1), thresholds ascending
  double auc = 0.0;
};

// ROC of "reject when p < threshold" over the distinct p-values of both
// samples (ties grouped), trapezoidal AUC.
inline RocCurve roc(std::span<const double> p_pos, std::span<const double> p_neg) {
  if (p_pos.empty() || p_neg.empty()) throw EmptyInput("roc: need both p-value samples");
  std::vector<double> pos(p_pos.begin(), p_pos.end());
  std::vector<double> neg(p_neg.begin(), p_neg.end());
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  std::vector<double> thresholds;
  thresholds.reserve(pos.size() + neg.size() + 1);
  std::merge(pos.begin(), pos.end(), neg.begin(), neg.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  thresholds.push_back(std::numeric_limits<double>::infinity());

  RocCurve rc;
  rc.fpr.reserve(thresholds.size());
  rc.tpr.reserve(thresholds.size());
  std::size_t i = 0, j = 0;
  for (double th : thresholds) {
    while (i < pos.size() && pos[i] < th) ++i;
    while (j < neg.size() && neg[j] < th) ++j;
    rc.tpr.push_back(static_cast<double>(i) / static_cast<double>(pos.size()));
    rc.fpr.push_back(static_cast<double>(j) / static_cast<double>(neg.size()));
  }
  for (std::size_t k = 1; k < rc.fpr.size(); ++k)
    rc.auc += 0.5 * (rc.fpr[k] - rc.fpr[k - 1]) * (rc.tpr[k] + rc.tpr[k - 1]);
  return rc;
}

struct AgreementPair {
  double neg_log10_p_glm = 0.0;  // clipped at -log10(p_floor)
  double neg_log10_p_phase = 0.0;
  double c_obs = 0.0;
};

// Parametric vs surrogate p-values on a common -log10 scale. The parametric
// side is clipped at the surrogate resolution floor (p_floor, e.g. 1/2001)
// so both axes saturate at the same ceiling.
inline std::vector<AgreementPair> agreement_pairs(std::span<const SweepRecord> records,
                                                  double p_floor) {
  if (records.empty()) throw EmptyInput("agreement_pairs: no records");
  if (!(p_floor > 0.0) || p_floor >= 1.0)
    throw ConfigError("agreement_pairs: p_floor must be in (0, 1)");
  const double cap = -std::log10(p_floor);
  std::vector<AgreementPair> out;
  out.reserve(records.size());
  for (const SweepRecord& r : records) {
    AgreementPair a;
    a.neg_log10_p_glm = r.p_glm > 0.0 ? std::min(-std::log10(r.p_glm), cap) : cap;
    a.neg_log10_p_phase = -std::log10(std::max(r.p_phase, std::numeric_limits<double>::min()));
    a.c_obs = r.c_obs;
    out.push_back(a);
  }
  return out;
}

struct Psd {
  std::vector<double> freq_hz;
  std::vector<double> density;  // one-sided, integrates to the signal variance
};

// Welch power spectral density: Hann-windowed overlapping segments,
// per-segment mean removal, one-sided normalization by fs and window energy.
inline Psd welch_psd(const Signal& s, double segment_s, double overlap_frac) {
  s.validate();
  if (!(overlap_frac >= 0.0) || overlap_frac >= 1.0)
    throw ConfigError("welch_psd: overlap_frac must be in [0, 1)");
  const double fs = s.fs_hz;
  const std::size_t n = s.samples.size();
  const auto nseg = static_cast<std::size_t>(std::llround(segment_s * fs));
  if (nseg < 4 || nseg > n) throw SignalTooShort("welch_psd: bad segment length");
  const auto hop = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(nseg) * (1.0 - overlap_frac))));

  std::vector<double> window(nseg);
  double u = 0.0;
  for (std::size_t j = 0; j < nseg; ++j) {
    window[j] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(nseg)));
    u += window[j] * window[j];
  }

  const std::size_t nfft = next_pow2(nseg);
  const std::size_t n_bins = nfft / 2 + 1;
  std::vector<double> acc(n_bins, 0.0);
  std::vector<double> seg(nfft, 0.0);
  std::size_t n_segments = 0;
  for (std::size_t start = 0; start + nseg <= n; start += hop) {
    double m = 0.0;
    for (std::size_t j = 0; j < nseg; ++j) m += s.samples[start + j];
    m /= static_cast<double>(nseg);
    std::fill(seg.begin(), seg.end(), 0.0);
    for (std::size_t j = 0; j < nseg; ++j) seg[j] = (s.samples[start + j] - m) * window[j];
    const std::vector<cdouble> spec = rfft(seg, nfft);
    for (std::size_t k = 0; k < n_bins; ++k) acc[k] += std::norm(spec[k]);
    ++n_segments;
  }

  Psd psd;
  psd.freq_hz.resize(n_bins);
  psd.density.resize(n_bins);
  const double df = fs / static_cast<double>(nfft);
  for (std::size_t k = 0; k < n_bins; ++k) {
    psd.freq_hz[k] = df * static_cast<double>(k);
    const double one_sided = (k == 0 || k == n_bins - 1) ? 1.0 : 2.0;
    psd.density[k] = one_sided * acc[k] / (static_cast<double>(n_segments) * fs * u);
  }
  return psd;
}

}  // namespace cohtest
