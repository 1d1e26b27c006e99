// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#include "cohtest/surrogate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "cohtest/coherence.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/stats.hpp"
#include "cohtest/types.hpp"

namespace cohtest {
namespace {

BandRep random_rep(std::size_t rows, std::size_t bands, std::uint64_t seed) {
  std::vector<double> centers(bands);
  for (std::size_t k = 0; k < bands; ++k) centers[k] = 0.1 * double(k + 1);
  BandRep rep(rows, centers, 1.0);
  RngStream rng(seed);
  for (std::size_t k = 0; k < bands; ++k)
    for (std::size_t t = 0; t < rows; ++t) rep.at(t, k) = {rng.normal(), rng.normal()};
  return rep;
}

TEST(Surrogate, CircShiftHandCase) {
  BandRep rep(3, {0.1}, 1.0);
  rep.at(0, 0) = {1.0, 0.0};
  rep.at(1, 0) = {2.0, 0.0};
  rep.at(2, 0) = {3.0, 0.0};
  const BandRep s1 = circ_shift(rep, 1);
  EXPECT_DOUBLE_EQ(s1.at(0, 0).real(), 2.0);
  EXPECT_DOUBLE_EQ(s1.at(1, 0).real(), 3.0);
  EXPECT_DOUBLE_EQ(s1.at(2, 0).real(), 1.0);
  const BandRep s0 = circ_shift(rep, 0);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(s0.at(t, 0), rep.at(t, 0));
  EXPECT_THROW(circ_shift(rep, 3), BadLag);
}

TEST(Surrogate, PhaseRandomizePreservesMagnitudes) {
  const BandRep rep = random_rep(32, 3, 5);
  RngStream rng(9);
  const BandRep rot = phase_randomize(rep, rng);
  ASSERT_TRUE(rot.same_shape(rep));
  double changed = 0.0;
  for (std::size_t k = 0; k < rep.bands(); ++k) {
    for (std::size_t t = 0; t < rep.rows(); ++t) {
      EXPECT_NEAR(std::abs(rot.at(t, k)), std::abs(rep.at(t, k)), 1e-12);
      changed += std::abs(rot.at(t, k) - rep.at(t, k));
    }
  }
  EXPECT_GT(changed, 1.0);  // the rotation actually moved the data
}

TEST(Surrogate, SameSeedSameResult) {
  const BandRep ax = random_rep(40, 2, 11);
  const BandRep ay = random_rep(40, 2, 12);
  SurrogateConfig cfg;
  cfg.n_perm = 100;
  cfg.seed = 77;
  for (const auto method : {SurrogateMethod::circular_shift, SurrogateMethod::phase_randomize}) {
    cfg.method = method;
    const SurrogateTestResult a = surrogate_pvalue(ax, ay, 1, cfg);
    const SurrogateTestResult b = surrogate_pvalue(ax, ay, 1, cfg);
    EXPECT_EQ(a.p_value, b.p_value);
    ASSERT_EQ(a.null_samples.size(), b.null_samples.size());
    for (std::size_t i = 0; i < a.null_samples.size(); ++i)
      EXPECT_EQ(a.null_samples[i], b.null_samples[i]);
  }
}

TEST(Surrogate, ResultIndependentOfOtherBands) {
  // Band k consumes only substreams keyed by k, so the verdict at one band
  // must not change when other bands' data changes.
  BandRep ax1 = random_rep(40, 3, 21);
  BandRep ay1 = random_rep(40, 3, 22);
  BandRep ax2 = random_rep(40, 3, 23);  // different everywhere...
  BandRep ay2 = random_rep(40, 3, 24);
  for (std::size_t t = 0; t < 40; ++t) {  // ...except band 1
    ax2.at(t, 1) = ax1.at(t, 1);
    ay2.at(t, 1) = ay1.at(t, 1);
  }
  SurrogateConfig cfg;
  cfg.n_perm = 50;
  cfg.seed = 5;
  for (const auto method : {SurrogateMethod::circular_shift, SurrogateMethod::phase_randomize}) {
    cfg.method = method;
    const auto r1 = surrogate_pvalue(ax1, ay1, 1, cfg);
    const auto r2 = surrogate_pvalue(ax2, ay2, 1, cfg);
    EXPECT_EQ(r1.p_value, r2.p_value);
    for (std::size_t i = 0; i < r1.null_samples.size(); ++i)
      EXPECT_EQ(r1.null_samples[i], r2.null_samples[i]);
  }
}

TEST(Surrogate, IdenticalPairHitsTheFloor) {
  const BandRep ax = random_rep(64, 1, 31);
  SurrogateConfig cfg;
  cfg.n_perm = 2000;
  cfg.seed = 3;
  for (const auto method : {SurrogateMethod::circular_shift, SurrogateMethod::phase_randomize}) {
    cfg.method = method;
    cfg.add_one = true;
    const SurrogateTestResult r = surrogate_pvalue(ax, ax, 0, cfg);
    EXPECT_NEAR(r.observed, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0 / 2001.0);
    EXPECT_DOUBLE_EQ(r.floor, 1.0 / 2001.0);
    cfg.add_one = false;
    EXPECT_DOUBLE_EQ(surrogate_pvalue(ax, ax, 0, cfg).p_value, 0.0);
  }
}

TEST(Surrogate, PvalueIsCountBased) {
  const BandRep ax = random_rep(32, 1, 41);
  const BandRep ay = random_rep(32, 1, 42);
  SurrogateConfig cfg;
  cfg.n_perm = 137;
  cfg.seed = 1;
  for (const auto method : {SurrogateMethod::circular_shift, SurrogateMethod::phase_randomize}) {
    cfg.method = method;
    const SurrogateTestResult r = surrogate_pvalue(ax, ay, 0, cfg);
    const double scaled = r.p_value * double(cfg.n_perm + 1);
    EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
    EXPECT_GE(r.p_value, r.floor);
    EXPECT_LE(r.p_value, 1.0);
    ASSERT_EQ(r.null_samples.size(), cfg.n_perm);
    for (double c : r.null_samples) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 1.0 + 1e-12);
    }
    EXPECT_EQ(r.observed, coherence_cols(ax.column(0), ay.column(0)));
  }
}

TEST(Surrogate, FalsePositiveRateIsCalibrated) {
  SurrogateConfig cfg;
  cfg.n_perm = 199;  // alpha * (n_perm + 1) = 10: the 5% level is exact
  int reject_circ = 0, reject_phase = 0;
  const int reps = 2000;
  for (int rep = 0; rep < reps; ++rep) {
    const BandRep ax = random_rep(32, 1, 1000 + std::uint64_t(rep));
    const BandRep ay = random_rep(32, 1, 9000 + std::uint64_t(rep));
    cfg.seed = std::uint64_t(rep);
    cfg.method = SurrogateMethod::circular_shift;
    reject_circ += surrogate_pvalue(ax, ay, 0, cfg).p_value <= 0.05;
    cfg.method = SurrogateMethod::phase_randomize;
    reject_phase += surrogate_pvalue(ax, ay, 0, cfg).p_value <= 0.05;
  }
  EXPECT_GT(reject_circ, int(reps * 0.03));
  EXPECT_LT(reject_circ, int(reps * 0.07));
  EXPECT_GT(reject_phase, int(reps * 0.03));
  EXPECT_LT(reject_phase, int(reps * 0.07));
}

TEST(Surrogate, CircAndPhaseNullsAgreeForIidColumns) {
  const BandRep ax = random_rep(256, 1, 51);
  const BandRep ay = random_rep(256, 1, 52);
  SurrogateConfig cfg;
  cfg.n_perm = 1000;
  cfg.seed = 8;
  cfg.method = SurrogateMethod::circular_shift;
  const auto circ = surrogate_pvalue(ax, ay, 0, cfg);
  cfg.method = SurrogateMethod::phase_randomize;
  const auto phase = surrogate_pvalue(ax, ay, 0, cfg);
  EXPECT_GT(ks_two_sample_pvalue(circ.null_samples, phase.null_samples), 0.001);
}

TEST(Surrogate, HarmonicColumnDefeatsLagResampling) {
  // x = y = i^t has period 4: every circular shift is a global phase
  // rotation, so the lag null is degenerate at the observed coherence and
  // the test reports no evidence. Phase randomization still breaks it.
  const std::size_t t_len = 48;
  BandRep rep(t_len, {0.25}, 1.0);
  const cdouble units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (std::size_t t = 0; t < t_len; ++t) rep.at(t, 0) = units[t % 4];

  SurrogateConfig cfg;
  cfg.n_perm = 500;
  cfg.seed = 17;
  cfg.method = SurrogateMethod::circular_shift;
  const auto circ = surrogate_pvalue(rep, rep, 0, cfg);
  EXPECT_DOUBLE_EQ(circ.observed, 1.0);
  EXPECT_DOUBLE_EQ(circ.p_value, 1.0);
  cfg.method = SurrogateMethod::phase_randomize;
  const auto phase = surrogate_pvalue(rep, rep, 0, cfg);
  EXPECT_DOUBLE_EQ(phase.p_value, 1.0 / 501.0);
}

TEST(Surrogate, FastPathMatchesMaterializedCircShift) {
  const BandRep ax = random_rep(40, 2, 61);
  const BandRep ay = random_rep(40, 2, 62);
  SurrogateConfig cfg;
  cfg.n_perm = 50;
  cfg.seed = 23;
  cfg.method = SurrogateMethod::circular_shift;
  const std::size_t band = 1;
  const auto res = surrogate_pvalue(ax, ay, band, cfg);
  for (std::size_t p = 0; p < cfg.n_perm; ++p) {
    RngStream rng = detail::surrogate_stream(cfg, band, p);
    const std::size_t lag = 1 + static_cast<std::size_t>(rng.below(ax.rows() - 1));
    const BandRep shifted = circ_shift(ax, lag);
    const double want = coherence_cols(shifted.column(band), ay.column(band));
    EXPECT_NEAR(res.null_samples[p], want, 1e-12);
  }
}

TEST(Surrogate, FastPathMatchesMaterializedPhaseRandomize) {
  const std::size_t rows = 40, band = 1;
  const BandRep ax = random_rep(rows, 2, 71);
  const BandRep ay = random_rep(rows, 2, 72);
  // Single-band copy of the tested column: phase_randomize then draws the
  // same angle sequence the fast path consumes.
  BandRep x1(rows, {ax.center_hz(band)}, ax.dt_s());
  BandRep y1(rows, {ay.center_hz(band)}, ay.dt_s());
  for (std::size_t t = 0; t < rows; ++t) {
    x1.at(t, 0) = ax.at(t, band);
    y1.at(t, 0) = ay.at(t, band);
  }
  SurrogateConfig cfg;
  cfg.n_perm = 50;
  cfg.seed = 29;
  cfg.method = SurrogateMethod::phase_randomize;
  const auto res = surrogate_pvalue(ax, ay, band, cfg);
  for (std::size_t p = 0; p < cfg.n_perm; ++p) {
    RngStream rng = detail::surrogate_stream(cfg, band, p);
    const BandRep rot = phase_randomize(x1, rng);
    const double want = coherence_cols(rot.column(0), y1.column(0));
    EXPECT_NEAR(res.null_samples[p], want, 1e-12);
  }
}

TEST(Surrogate, Errors) {
  const BandRep ax = random_rep(1, 1, 81);
  SurrogateConfig cfg;
  EXPECT_THROW(surrogate_pvalue(ax, ax, 0, cfg), InsufficientData);

  const BandRep a = random_rep(8, 1, 82);
  const BandRep b = random_rep(9, 1, 83);
  EXPECT_THROW(surrogate_pvalue(a, b, 0, cfg), ShapeMismatch);

  cfg.n_perm = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);

  const auto spec = surrogate_spectrum(a, random_rep(8, 1, 84), SurrogateConfig{});
  EXPECT_EQ(spec.size(), 1u);
}

}  // namespace
}  // namespace cohtest
