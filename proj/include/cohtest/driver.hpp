// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "cohtest/csv.hpp"
#include "cohtest/dbt.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/fft.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

enum class DriverSource { synthetic, csv_file };

// Recipe for the shared driver signal. Synthetic mode produces a z-scored
// quasi-sinusoid at f_br_hz whose amplitude carries both a slow wander and a
// fast broadband flutter, with phase-drift frequency jitter; csv mode loads
// and z-scores a recorded signal.
struct DriverSpec {
  DriverSource source = DriverSource::synthetic;
  std::string csv_path;        // csv_file only
  double duration_s = 367.0;
  double fs_hz = 250.0;
  double f_br_hz = 0.3;        // synthetic only
  double amp_jitter = 0.15;    // scale of both amplitude modulations (0 = pure tone)
  double freq_jitter = 0.004;  // phase random-walk diffusion in Hz / sqrt(s)

  void validate() const {
    if (fs_hz <= 0.0) throw ConfigError("driver: fs_hz must be positive");
    if (source == DriverSource::csv_file) {
      if (csv_path.empty()) throw ConfigError("driver: csv source needs a path");
      return;
    }
    if (duration_s <= 0.0) throw ConfigError("driver: duration_s must be positive");
    if (!(f_br_hz > 0.0) || f_br_hz >= 0.5 * fs_hz)
      throw ConfigError("driver: f_br_hz must lie in (0, fs/2)");
    if (amp_jitter < 0.0 || freq_jitter < 0.0)
      throw ConfigError("driver: jitter amplitudes must be nonnegative");
  }
};

namespace driver_const {
// Slow amplitude wander: AR(1) time constant.
inline constexpr double slow_tau_s = 300.0;
// Fast amplitude flutter: flat white band, cosine roll-off. A flat flutter
// spectrum keeps the band coefficients serially uncorrelated, which the
// lag-resampling null depends on.
inline constexpr double flutter_pass_hz = 0.32;
inline constexpr double flutter_stop_hz = 0.40;
// Flutter weight relative to amp_jitter (the slow wander has weight 1).
inline constexpr double flutter_gain = 8.0 / 3.0;
// Output band mask: hard cut below mask_lo_hz, unity passband up to
// f_br + mask_pass_rel_hz, cosine roll-off to zero at f_br + mask_stop_rel_hz.
inline constexpr double mask_lo_hz = 0.03;
inline constexpr double mask_pass_rel_hz = 0.40;
inline constexpr double mask_stop_rel_hz = 0.48;
// Broadband noise floor relative to the peak band power, and the amp_jitter
// at which that ratio is calibrated (the floor scales with amp_jitter so a
// jitter-free driver stays a pure tone).
inline constexpr double floor_db = -35.0;
inline constexpr double floor_ref_jitter = 0.15;
}  // namespace driver_const

namespace detail {

inline void zscore(std::vector<double>& x, const char* what) {
  double m = 0.0;
  for (double v : x) m += v;
  m /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - m) * (v - m);
  var /= static_cast<double>(x.size());
  if (var <= 0.0) throw DriverLoadError(std::string(what) + ": signal is constant");
  const double inv_sd = 1.0 / std::sqrt(var);
  for (double& v : x) v = (v - m) * inv_sd;
}

// In-place frequency-domain mask: zero below f_lo, unity through f_pass,
// raised-cosine roll-off hitting zero at f_stop. Works at the exact signal
// length so mask edges line up with the signal's own frequency grid.
inline void band_shape(std::vector<double>& x, double fs, double f_lo, double f_pass,
                       double f_stop) {
  const std::size_t n = x.size();
  std::vector<cdouble> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = {x[i], 0.0};
  z = fft(std::move(z));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t kf = k <= n - k ? k : n - k;
    const double f = static_cast<double>(kf) * fs / static_cast<double>(n);
    double g = 0.0;
    if (f >= f_lo) {
      if (f <= f_pass)
        g = 1.0;
      else if (f < f_stop)
        g = 0.5 * (1.0 + std::cos(std::numbers::pi * (f - f_pass) / (f_stop - f_pass)));
    }
    z[k] *= g;
  }
  z = ifft(std::move(z));
  for (std::size_t i = 0; i < n; ++i) x[i] = z[i].real();
}

inline Signal load_driver_csv(const std::string& path, double fs_hint) {
  const CsvTable tab = read_csv(path);
  std::vector<double> values;
  values.reserve(tab.rows.size());
  double fs = fs_hint;
  if (tab.header.size() == 1 && tab.header[0] == "value") {
    for (const auto& r : tab.rows) values.push_back(parse_double(r[0], "driver csv"));
  } else if (tab.header.size() == 2 && tab.header[0] == "time_s" && tab.header[1] == "value") {
    std::vector<double> times;
    for (const auto& r : tab.rows) {
      times.push_back(parse_double(r[0], "driver csv"));
      values.push_back(parse_double(r[1], "driver csv"));
    }
    if (times.size() < 2) throw DriverLoadError("'" + path + "': need at least 2 samples");
    const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (dt <= 0.0) throw DriverLoadError("'" + path + "': time column must increase");
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (std::fabs(times[i] - times[i - 1] - dt) > 1e-6 * std::max(dt, 1.0))
        throw DriverLoadError("'" + path + "': non-uniform sampling");
    }
    fs = 1.0 / dt;
  } else {
    throw DriverLoadError("'" + path + "': header must be 'time_s,value' or 'value'");
  }
  if (values.size() < 2) throw DriverLoadError("'" + path + "': need at least 2 samples");
  zscore(values, "driver csv");
  Signal s{std::move(values), fs};
  s.validate();
  return s;
}

}  // namespace detail

// Load a z-scored signal from CSV: either a `time_s,value` pair (sample rate
// derived from the time column) or a single `value` column at fs_hint.
inline Signal load_signal_csv(const std::string& path, double fs_hint) {
  return detail::load_driver_csv(path, fs_hint);
}

// Build the driver signal. All randomness comes from `rng` (taken by value so
// the caller's stream is untouched); the same spec and stream state always
// produce the same samples. Draw order: phase walk, slow wander, flutter,
// noise floor - each a block of `n` normal deviates.
inline Signal make_driver(const DriverSpec& spec, RngStream rng) {
  spec.validate();
  if (spec.source == DriverSource::csv_file)
    return detail::load_driver_csv(spec.csv_path, spec.fs_hz);

  namespace dc = driver_const;
  const double fs = spec.fs_hz;
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * fs));
  if (n < 2) throw SignalTooShort("driver: duration too short for the sample rate");

  // Quasi-sinusoid: phase increments with a random-walk frequency jitter.
  std::vector<double> tone(n);
  {
    const double dphi0 = 2.0 * std::numbers::pi * spec.f_br_hz / fs;
    const double walk = 2.0 * std::numbers::pi * spec.freq_jitter / std::sqrt(fs);
    double phi = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      phi += dphi0 + walk * rng.normal();
      tone[t] = std::sin(phi);
    }
  }

  // Slow amplitude wander: stationary unit-variance AR(1).
  std::vector<double> slow(n);
  {
    const double rho = std::exp(-1.0 / (dc::slow_tau_s * fs));
    const double drive = std::sqrt(1.0 - rho * rho);
    slow[0] = rng.normal();
    for (std::size_t t = 1; t < n; ++t) slow[t] = rho * slow[t - 1] + drive * rng.normal();
  }

  // Fast amplitude flutter: band-limited white noise, normalized to unit sd.
  std::vector<double> flutter(n);
  for (double& v : flutter) v = rng.normal();
  detail::band_shape(flutter, fs, 0.0, dc::flutter_pass_hz, dc::flutter_stop_hz);
  {
    double var = 0.0;
    for (double v : flutter) var += v * v;
    var /= static_cast<double>(n);
    const double inv_sd = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    for (double& v : flutter) v *= inv_sd;
  }

  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double env = 1.0 + spec.amp_jitter * slow[t] + dc::flutter_gain * spec.amp_jitter * flutter[t];
    x[t] = env * tone[t];
  }
  detail::band_shape(x, fs, std::min(dc::mask_lo_hz, 0.5 * spec.f_br_hz),
                     spec.f_br_hz + dc::mask_pass_rel_hz, spec.f_br_hz + dc::mask_stop_rel_hz);
  detail::zscore(x, "driver");

  // Broadband floor, scaled so its per-band power sits floor_db below the
  // peak band. Proportional to amp_jitter: a jitter-free driver is left pure.
  if (spec.amp_jitter > 0.0) {
    BandParams bp;
    bp.range_high_hz = std::max(bp.range_high_hz, spec.f_br_hz + 2.5 * bp.bandwidth_hz);
    const Signal probe{x, fs};
    const BandRep rep = decompose(probe, bp);
    const double p_br = band_power(rep, peak_frequency(rep).first);
    const double ratio = std::pow(10.0, dc::floor_db / 10.0);
    const double kappa =
        std::sqrt(ratio * p_br * (fs / (2.0 * bp.bandwidth_hz)) *
                  static_cast<double>(bp.upsample_fx + 1) / static_cast<double>(n)) *
        (spec.amp_jitter / dc::floor_ref_jitter);
    for (double& v : x) v += kappa * rng.normal();
    detail::zscore(x, "driver");
  }

  Signal out{std::move(x), fs};
  out.validate();
  return out;
}

}  // namespace cohtest
