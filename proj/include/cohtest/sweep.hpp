// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cohtest/coherence.hpp"
#include "cohtest/csv.hpp"
#include "cohtest/dbt.hpp"
#include "cohtest/driver.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/glm.hpp"
#include "cohtest/parallel.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/surrogate.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

struct SweepConfig {
  std::vector<double> c_true_grid;  // sorted, each strictly in (0, 1)
  std::uint64_t seed = 0;
  BandParams band_params;

  void validate() const {
    if (c_true_grid.empty()) throw EmptyInput("sweep: c_true_grid is empty");
    for (double c : c_true_grid)
      if (!(c > 0.0) || !(c < 1.0)) throw BadTarget("sweep: c_true must lie strictly in (0, 1)");
    for (std::size_t i = 1; i < c_true_grid.size(); ++i)
      if (c_true_grid[i] < c_true_grid[i - 1]) throw ConfigError("sweep: c_true_grid must be sorted");
    band_params.validate();
  }
};

struct SweepRecord {
  double c_true = 0.0;
  double sigma_n = 0.0;
  double snr_db = 0.0;
  double c_obs = 0.0;
  double p_glm = 1.0;
  double p_circ = 1.0;
  double p_phase = 1.0;
  double f_br_hz = 0.0;  // center of the band the record was measured at
};

// Additive-noise standard deviation that places the expected coherence at
// c_true, given the driver's peak band power p_x: white noise of variance
// sigma^2 carries band power sigma^2 * (2b/fs) * n / (u_fx + 1), and
// coherence settles at sqrt(p_x / (p_x + p_noise)).
inline double noise_sigma(double c_true, double p_x, double fs_hz, double b_hz,
                          std::size_t u_fx, std::size_t n) {
  if (!(c_true > 0.0) || !(c_true < 1.0))
    throw BadTarget("noise_sigma: c_true must lie strictly in (0, 1)");
  if (p_x <= 0.0) throw Error("noise_sigma: band power must be positive");
  return std::sqrt((1.0 / (c_true * c_true) - 1.0) * p_x * fs_hz / (2.0 * b_hz) *
                   static_cast<double>(u_fx + 1) / static_cast<double>(n));
}

struct Observation {
  Signal y;
  double sigma_n = 0.0;
  double snr_db = 0.0;
};

namespace detail {

inline double variance(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size());
}

// Core path with the driver's peak band power already known.
inline Observation make_observation_with_power(const Signal& x, double c_true,
                                               const BandParams& bp, RngStream& rng,
                                               double p_x) {
  const std::size_t n = x.samples.size();
  const double sigma = noise_sigma(c_true, p_x, x.fs_hz, bp.bandwidth_hz, bp.upsample_fx, n);
  std::vector<double> noise(n);
  for (double& v : noise) v = sigma * rng.normal();
  Observation obs;
  obs.sigma_n = sigma;
  obs.y.fs_hz = x.fs_hz;
  obs.y.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) obs.y.samples[i] = x.samples[i] + noise[i];
  obs.snr_db = 10.0 * std::log10(variance(x.samples) / variance(noise));
  return obs;
}

}  // namespace detail

// Target observation y = x + noise, with the noise level chosen so the peak
// band coherence concentrates around c_true. The second overload skips the
// driver decomposition when its peak band power is already known.
inline Observation make_observation(const Signal& x, double c_true, const BandParams& bp,
                                    RngStream& rng) {
  const BandRep ax = decompose(x, bp);
  const double p_x = band_power(ax, peak_frequency(ax).first);
  return detail::make_observation_with_power(x, c_true, bp, rng, p_x);
}

inline Observation make_observation(const Signal& x, double c_true, const BandParams& bp,
                                    RngStream& rng, double p_x) {
  return detail::make_observation_with_power(x, c_true, bp, rng, p_x);
}

struct SweepResult {
  std::vector<SweepRecord> records;  // measured at the driver's peak band
  std::vector<SweepRecord> control;  // same realizations at the control band
  std::size_t f_br_band = 0;
  double f_br_hz = 0.0;
  std::size_t control_band = 0;
  double control_hz = 0.0;
};

namespace detail {

inline std::size_t nearest_band(const BandRep& rep, double freq_hz) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rep.bands(); ++k) {
    const double d = std::fabs(rep.center_hz(k) - freq_hz);
    if (d < best_dist) {
      best_dist = d;
      best = k;
    }
  }
  return best;
}

}  // namespace detail

// Full sweep: one shared driver, one record per target. The driver is
// decomposed once; each target consumes only substreams keyed by its index,
// so records are bitwise reproducible for a given seed regardless of thread
// count or evaluation order. The peak band is detected from the driver's own
// decomposition, never assumed from the configured burst rate.
inline SweepResult run_sweep(const DriverSpec& dspec, const SweepConfig& cfg,
                             const SurrogateConfig& scfg = {}, double control_freq_hz = 1.0,
                             int threads = 1) {
  cfg.validate();
  scfg.validate();
  const Signal x = make_driver(dspec, RngStream(cfg.seed).sub(rng_purpose::driver));
  const BandRep ax = decompose(x, cfg.band_params);

  SweepResult res;
  res.f_br_band = peak_frequency(ax).first;
  res.f_br_hz = ax.center_hz(res.f_br_band);
  res.control_band = detail::nearest_band(ax, control_freq_hz);
  res.control_hz = ax.center_hz(res.control_band);
  const double p_x = band_power(ax, res.f_br_band);

  const std::size_t n_targets = cfg.c_true_grid.size();
  res.records.resize(n_targets);
  res.control.resize(n_targets);

  parallel_for(n_targets, threads, [&](std::size_t i) {
    RngStream noise_rng = RngStream(cfg.seed).sub(rng_purpose::noise).sub(i);
    const Observation obs = detail::make_observation_with_power(
        x, cfg.c_true_grid[i], cfg.band_params, noise_rng, p_x);
    const BandRep ay = decompose(obs.y, cfg.band_params);

    SurrogateConfig sc = scfg;
    sc.seed = RngStream(cfg.seed).sub(rng_purpose::target).sub(i).u64();
    SurrogateConfig sc_circ = sc;
    sc_circ.method = SurrogateMethod::circular_shift;
    SurrogateConfig sc_phase = sc;
    sc_phase.method = SurrogateMethod::phase_randomize;

    for (const bool is_control : {false, true}) {
      const std::size_t band = is_control ? res.control_band : res.f_br_band;
      SweepRecord rec;
      rec.c_true = cfg.c_true_grid[i];
      rec.sigma_n = obs.sigma_n;
      rec.snr_db = obs.snr_db;
      rec.f_br_hz = ax.center_hz(band);
      rec.c_obs = coherence_at(ax, ay, band);
      rec.p_glm = glm_pvalue(ax.column(band), ay.column(band)).p_value;
      rec.p_circ = surrogate_pvalue(ax, ay, band, sc_circ).p_value;
      rec.p_phase = surrogate_pvalue(ax, ay, band, sc_phase).p_value;
      (is_control ? res.control[i] : res.records[i]) = rec;
    }
  });
  return res;
}

inline std::vector<std::string> sweep_csv_header() {
  return {"c_true", "sigma_n", "snr_db", "c_obs", "p_glm", "p_circ", "p_phase", "f_br_hz"};
}

inline std::vector<std::string> sweep_csv_row(const SweepRecord& r) {
  return {format_double(r.c_true), format_double(r.sigma_n), format_double(r.snr_db),
          format_double(r.c_obs),  format_double(r.p_glm),   format_double(r.p_circ),
          format_double(r.p_phase), format_double(r.f_br_hz)};
}

inline SweepRecord sweep_record_from_row(const CsvTable& tab, std::size_t row) {
  static const char* what = "sweep csv";
  SweepRecord r;
  r.c_true = parse_double(tab.rows[row][tab.column("c_true", what)], what);
  r.sigma_n = parse_double(tab.rows[row][tab.column("sigma_n", what)], what);
  r.snr_db = parse_double(tab.rows[row][tab.column("snr_db", what)], what);
  r.c_obs = parse_double(tab.rows[row][tab.column("c_obs", what)], what);
  r.p_glm = parse_double(tab.rows[row][tab.column("p_glm", what)], what);
  r.p_circ = parse_double(tab.rows[row][tab.column("p_circ", what)], what);
  r.p_phase = parse_double(tab.rows[row][tab.column("p_phase", what)], what);
  r.f_br_hz = parse_double(tab.rows[row][tab.column("f_br_hz", what)], what);
  return r;
}

inline std::vector<SweepRecord> read_sweep_csv(const std::string& path) {
  const CsvTable tab = read_csv(path);
  std::vector<SweepRecord> out;
  out.reserve(tab.rows.size());
  for (std::size_t i = 0; i < tab.rows.size(); ++i) out.push_back(sweep_record_from_row(tab, i));
  return out;
}

}  // namespace cohtest
