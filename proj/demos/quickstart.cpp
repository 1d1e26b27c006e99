// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal end-to-end walk: synthesize a driver, add calibrated noise for a
// target coherence, and compare the parametric test with both surrogate
// nulls at the driven band and at a quiet control band.

#include <cstdio>

#include "cohtest/cohtest.hpp"

int main() {
  using namespace cohtest;

  DriverSpec dspec;
  dspec.duration_s = 200.0;
  RngStream root(42);
  const Signal x = make_driver(dspec, root.sub(rng_purpose::driver));

  BandParams bands;
  const BandRep ax = decompose(x, bands);
  const auto [peak, peak_hz] = peak_frequency(ax);
  std::printf("driver: %zu samples at %g Hz, peak band %.2f Hz\n", x.samples.size(), x.fs_hz,
              peak_hz);

  const double c_true = 0.6;
  RngStream noise_rng = root.sub(rng_purpose::noise);
  const Observation obs = make_observation(x, c_true, bands, noise_rng);
  const BandRep ay = decompose(obs.y, bands);
  std::printf("observation: c_true %.2f, sigma_n %.4f, snr %.2f dB\n", c_true, obs.sigma_n,
              obs.snr_db);

  SurrogateConfig circ;
  circ.n_perm = 500;
  circ.seed = root.sub(rng_purpose::target).u64();
  SurrogateConfig phase = circ;
  phase.method = SurrogateMethod::phase_randomize;

  const std::size_t control = 20;  // 1.0 Hz with default band spacing
  for (const std::size_t band : {peak, control}) {
    const double c = coherence_at(ax, ay, band);
    const GlmTestResult glm = glm_pvalue(ax.column(band), ay.column(band));
    const double p_circ = surrogate_pvalue(ax, ay, band, circ).p_value;
    const double p_phase = surrogate_pvalue(ax, ay, band, phase).p_value;
    std::printf("band %.2f Hz: c_obs %.3f, p_glm %.3g, p_circ %.3g, p_phase %.3g\n",
                ax.center_hz(band), c, glm.p_value, p_circ, p_phase);
  }
  return 0;
}
