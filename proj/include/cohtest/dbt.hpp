// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "cohtest/errors.hpp"
#include "cohtest/fft.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

namespace detail {

// Frequency-domain amplitude taper, in FFT bins away from band center.
// Support is |d| <= m_pts where m_pts is the bin count of the complex rate
// 2B.  Both tapers keep sum_r w^2(d + r*m_pts) = 1, so a folded band of
// white noise demodulates to serially uncorrelated coefficients: the power
// response is flat at the complex Nyquist rate.
inline double taper_weight(Taper taper, double d, double m_pts) {
  const double ad = std::abs(d);
  if (taper == Taper::raised_cosine) {
    if (ad >= m_pts) return 0.0;
    return std::cos(std::numbers::pi * d / (2.0 * m_pts));
  }
  // rectangular: unit passband of width m_pts, half-power at a shared edge
  if (ad < 0.5 * m_pts - 0.25) return 1.0;
  if (ad > 0.5 * m_pts + 0.25) return 0.0;
  return std::numbers::sqrt2 / 2.0;
}

}  // namespace detail

// Overlapping-band decomposition: one full-signal real FFT, then per band a
// folded taper extraction around the center bin, demodulation to baseband,
// and an inverse FFT to the complex rate 2B.  Rows are the first
// floor(2B * duration) samples (the span the input actually occupies once
// the FFT length is rounded up to a power of two).
inline BandRep decompose(const Signal& signal, const BandParams& params) {
  signal.validate();
  params.validate();
  const std::size_t n = signal.samples.size();
  const double fs = signal.fs_hz;
  const double b = params.bandwidth_hz;
  if (params.range_high_hz > fs / 2.0)
    throw InvalidBandRange("band range exceeds Nyquist");
  if (2.0 * b * signal.duration_s() < 2.0)
    throw SignalTooShort("need bandwidth * duration >= 1");

  const std::size_t nfft = next_pow2(n);
  const std::vector<cdouble> spectrum = rfft(signal.samples, nfft);
  const std::size_t nbins = nfft / 2;
  const double df = fs / static_cast<double>(nfft);

  // m = bins per complex period: the length of each band's inverse FFT.
  const auto m = static_cast<std::size_t>(std::llround(2.0 * b * nfft / fs));
  if (m < 4) throw SignalTooShort("bandwidth too small for this signal");
  const auto t_rows = static_cast<std::size_t>(
      std::max<long long>(2, static_cast<long long>(std::floor(2.0 * b * n / fs))));

  const double spacing = params.spacing_hz();
  const auto f_bands = static_cast<std::size_t>(
      std::floor((params.range_high_hz - params.range_low_hz) / spacing + 1e-9)) + 1;
  std::vector<double> centers(f_bands);
  for (std::size_t j = 0; j < f_bands; ++j)
    centers[j] = params.range_low_hz + spacing * static_cast<double>(j);

  // Gain calibrated so a band of white noise with variance s^2 carries
  // power s^2 * (2B/fs) * N / (U_fx + 1) in the kept rows.  The N/nfft
  // factor accounts for zero padding: the signal's energy occupies only
  // the first N samples' worth of each band's time axis.
  const double gain = std::sqrt((2.0 * b / fs) * static_cast<double>(m) *
                                static_cast<double>(n) /
                                (static_cast<double>(nfft) * (params.upsample_fx + 1)));

  const double dt = static_cast<double>(nfft) / (static_cast<double>(m) * fs);
  BandRep rep(t_rows, std::move(centers), dt);

  const double m_pts = static_cast<double>(m);
  std::vector<cdouble> band(m);
  for (std::size_t fi = 0; fi < rep.bands(); ++fi) {
    const auto kc = static_cast<long long>(std::llround(rep.center_hz(fi) / df));
    std::fill(band.begin(), band.end(), cdouble{});
    for (std::size_t j = 0; j < m; ++j) {
      const long long base =
          (j < (m + 1) / 2) ? static_cast<long long>(j)
                            : static_cast<long long>(j) - static_cast<long long>(m);
      for (int r = -1; r <= 1; ++r) {
        const long long d = base + static_cast<long long>(r) * static_cast<long long>(m);
        const double w = detail::taper_weight(params.taper, static_cast<double>(d), m_pts);
        if (w == 0.0) continue;
        const long long k = kc + d;
        if (k < 0 || k > static_cast<long long>(nbins)) continue;  // one-sided clip
        band[j] += w * spectrum[static_cast<std::size_t>(k)];
      }
    }
    std::vector<cdouble> series = ifft(band);
    auto col = rep.column(fi);
    for (std::size_t t = 0; t < t_rows; ++t) col[t] = gain * series[t];
  }
  return rep;
}

// Band with the largest mean squared magnitude; ties go to the lower index.
inline std::pair<std::size_t, double> peak_frequency(const BandRep& rep) {
  if (rep.bands() == 0 || rep.rows() == 0) throw NoPeak("empty representation");
  std::size_t best = 0;
  double best_power = -1.0;
  for (std::size_t fi = 0; fi < rep.bands(); ++fi) {
    double p = 0.0;
    for (cdouble c : rep.column(fi)) p += std::norm(c);
    if (p > best_power) {
      best_power = p;
      best = fi;
    }
  }
  if (best_power <= 0.0) throw NoPeak("all-zero representation");
  return {best, rep.center_hz(best)};
}

// Mean squared coefficient magnitude of one band.
inline double band_power(const BandRep& rep, std::size_t band) {
  auto col = rep.column(band);
  if (col.empty()) throw BadIndex("empty band");
  double p = 0.0;
  for (cdouble c : col) p += std::norm(c);
  return p / static_cast<double>(col.size());
}

}  // namespace cohtest
