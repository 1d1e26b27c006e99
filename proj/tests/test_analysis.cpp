// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#include "cohtest/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cohtest/errors.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/sweep.hpp"
#include "cohtest/types.hpp"

namespace cohtest {
namespace {

SweepRecord rec(double c_obs, double p_glm, double p_circ, double p_phase, double snr_db = 0.0) {
  SweepRecord r;
  r.c_obs = c_obs;
  r.c_true = c_obs;
  r.p_glm = p_glm;
  r.p_circ = p_circ;
  r.p_phase = p_phase;
  r.snr_db = snr_db;
  return r;
}

TEST(Analysis, PowerCurveHandInterpolation) {
  // Two occupied bins: [0.100, 0.125) at rate 1/4 and [0.300, 0.325) at 1.
  std::vector<SweepRecord> rs;
  rs.push_back(rec(0.11, 0.01, 1.0, 1.0, -5.0));
  rs.push_back(rec(0.11, 0.50, 1.0, 1.0, -5.0));
  rs.push_back(rec(0.11, 0.50, 1.0, 1.0, -5.0));
  rs.push_back(rec(0.11, 0.50, 1.0, 1.0, -5.0));
  rs.push_back(rec(0.31, 0.01, 1.0, 1.0, 10.0));
  rs.push_back(rec(0.31, 0.01, 1.0, 1.0, 10.0));

  const PowerCurve pc = power_curve(rs, 0.05, 0.025);
  ASSERT_EQ(pc.bin_centers.size(), 2u);
  EXPECT_DOUBLE_EQ(pc.bin_centers[0], 0.1125);
  EXPECT_DOUBLE_EQ(pc.bin_centers[1], 0.3125);
  EXPECT_EQ(pc.bin_counts[0], 4u);
  EXPECT_EQ(pc.bin_counts[1], 2u);
  EXPECT_DOUBLE_EQ(pc.rate_glm[0], 0.25);
  EXPECT_DOUBLE_EQ(pc.rate_glm[1], 1.0);

  // Linear interpolation between (0.1125, 0.25) and (0.3125, 1.0).
  EXPECT_NEAR(pc.glm.c50, 0.1125 + 0.25 / 0.75 * 0.2, 1e-12);
  EXPECT_NEAR(pc.glm.c80, 0.1125 + 0.55 / 0.75 * 0.2, 1e-12);
  EXPECT_NEAR(pc.glm.c90, 0.1125 + 0.65 / 0.75 * 0.2, 1e-12);
  EXPECT_DOUBLE_EQ(pc.glm.snr_at_80_db, 10.0);

  // The surrogate columns never detect: thresholds are NaN.
  EXPECT_TRUE(std::isnan(pc.circ.c50));
  EXPECT_TRUE(std::isnan(pc.circ.c80));
  EXPECT_TRUE(std::isnan(pc.circ.snr_at_80_db));
  EXPECT_TRUE(std::isnan(pc.phase.c90));
  EXPECT_DOUBLE_EQ(pc.rate_circ[1], 0.0);
}

TEST(Analysis, PowerCurveFirstBinCrossing) {
  std::vector<SweepRecord> rs;
  for (int i = 0; i < 3; ++i) rs.push_back(rec(0.06, 0.001, 0.001, 0.001));
  for (int i = 0; i < 3; ++i) rs.push_back(rec(0.56, 0.001, 0.001, 0.001));
  const PowerCurve pc = power_curve(rs);
  // Already above every level in the first bin: thresholds sit at its center.
  EXPECT_DOUBLE_EQ(pc.glm.c50, pc.bin_centers[0]);
  EXPECT_DOUBLE_EQ(pc.glm.c80, pc.bin_centers[0]);
  EXPECT_DOUBLE_EQ(pc.glm.c90, pc.bin_centers[0]);
}

TEST(Analysis, PowerCurveByTrueAxisAndClamp) {
  std::vector<SweepRecord> rs;
  SweepRecord a = rec(0.2, 1.0, 1.0, 1.0);
  a.c_true = 0.96;
  SweepRecord b = rec(0.3, 1.0, 1.0, 1.0);
  b.c_true = 0.98;
  SweepRecord c = rec(1.0, 1.0, 1.0, 1.0);  // exactly 1.0 clamps into the top bin
  c.c_true = 0.5;
  rs = {a, b, c};
  const PowerCurve by_obs = power_curve(rs, 0.05, 0.025, false);
  ASSERT_EQ(by_obs.bin_centers.size(), 3u);
  EXPECT_DOUBLE_EQ(by_obs.bin_centers.back(), 0.9875);

  const PowerCurve by_true = power_curve(rs, 0.05, 0.025, true);
  ASSERT_EQ(by_true.bin_centers.size(), 3u);
  EXPECT_DOUBLE_EQ(by_true.bin_centers[0], 0.5125);
  EXPECT_EQ(by_true.bin_counts[2], 1u);
}

TEST(Analysis, PowerCurveErrors) {
  EXPECT_THROW(power_curve({}), EmptyInput);
  std::vector<SweepRecord> rs = {rec(0.5, 0.5, 0.5, 0.5), rec(0.51, 0.5, 0.5, 0.5)};
  EXPECT_THROW(power_curve(rs, 0.0), ConfigError);
  EXPECT_THROW(power_curve(rs, 1.0), ConfigError);
  EXPECT_THROW(power_curve(rs, 0.05, 0.0), ConfigError);
  EXPECT_THROW(power_curve(rs, 0.05, 1.5), ConfigError);
  // Both records in one bin: not enough support for a curve.
  std::vector<SweepRecord> one = {rec(0.5, 0.5, 0.5, 0.5), rec(0.501, 0.5, 0.5, 0.5)};
  EXPECT_THROW(power_curve(one), InsufficientData);
}

TEST(Analysis, RocPerfectAndReversed) {
  const std::vector<double> low = {0.001, 0.002, 0.003};
  const std::vector<double> high = {0.5, 0.6, 0.7};
  EXPECT_DOUBLE_EQ(roc(low, high).auc, 1.0);
  EXPECT_DOUBLE_EQ(roc(high, low).auc, 0.0);
}

TEST(Analysis, RocHandValueAndEndpoints) {
  const std::vector<double> pos = {0.1, 0.2};
  const std::vector<double> neg = {0.15, 0.5};
  const RocCurve rc = roc(pos, neg);
  EXPECT_NEAR(rc.auc, 0.75, 1e-12);
  ASSERT_GE(rc.fpr.size(), 2u);
  EXPECT_DOUBLE_EQ(rc.fpr.front(), 0.0);
  EXPECT_DOUBLE_EQ(rc.tpr.front(), 0.0);
  EXPECT_DOUBLE_EQ(rc.fpr.back(), 1.0);
  EXPECT_DOUBLE_EQ(rc.tpr.back(), 1.0);
  for (std::size_t k = 1; k < rc.fpr.size(); ++k) {
    EXPECT_GE(rc.fpr[k], rc.fpr[k - 1]);
    EXPECT_GE(rc.tpr[k], rc.tpr[k - 1]);
  }
}

TEST(Analysis, RocTiesAndIdenticalSamples) {
  const std::vector<double> same = {0.1, 0.2, 0.3};
  EXPECT_NEAR(roc(same, same).auc, 0.5, 1e-12);
  const std::vector<double> tied = {0.1, 0.1};
  EXPECT_DOUBLE_EQ(roc(tied, tied).auc, 0.5);
}

TEST(Analysis, RocInvariantUnderMonotoneTransform) {
  RngStream rng(3);
  std::vector<double> pos(200), neg(200);
  for (double& v : pos) v = rng.uniform() * rng.uniform();  // skewed low
  for (double& v : neg) v = rng.uniform();
  const double base = roc(pos, neg).auc;
  auto squash = [](std::vector<double> v) {
    for (double& x : v) x = x * x;  // strictly increasing on [0, 1]
    return v;
  };
  EXPECT_DOUBLE_EQ(roc(squash(pos), squash(neg)).auc, base);
  EXPECT_GT(base, 0.5);
}

TEST(Analysis, RocNullIsHalf) {
  RngStream rng(5);
  std::vector<double> a(10000), b(10000);
  for (double& v : a) v = rng.uniform();
  for (double& v : b) v = rng.uniform();
  const double auc = roc(a, b).auc;
  EXPECT_GT(auc, 0.48);
  EXPECT_LT(auc, 0.52);
}

TEST(Analysis, RocErrors) {
  const std::vector<double> one = {0.5};
  const std::vector<double> none;
  EXPECT_THROW(roc(none, one), EmptyInput);
  EXPECT_THROW(roc(one, none), EmptyInput);
}

TEST(Analysis, AgreementPairsClipAtFloor) {
  const double floor = 1.0 / 2001.0;
  std::vector<SweepRecord> rs;
  rs.push_back(rec(0.9, 1e-10, 1.0, floor));       // glm far below the floor
  rs.push_back(rec(0.5, 0.5, 1.0, 0.5));           // mid-range
  rs.push_back(rec(0.99, 0.0, 1.0, floor));        // glm underflowed to 0
  const auto pairs = agreement_pairs(rs, floor);
  ASSERT_EQ(pairs.size(), 3u);
  const double cap = std::log10(2001.0);
  EXPECT_NEAR(pairs[0].neg_log10_p_glm, cap, 1e-12);
  EXPECT_NEAR(pairs[0].neg_log10_p_phase, cap, 1e-12);
  EXPECT_NEAR(pairs[1].neg_log10_p_glm, -std::log10(0.5), 1e-12);
  EXPECT_NEAR(pairs[1].neg_log10_p_phase, -std::log10(0.5), 1e-12);
  EXPECT_NEAR(pairs[2].neg_log10_p_glm, cap, 1e-12);
  EXPECT_DOUBLE_EQ(pairs[0].c_obs, 0.9);

  EXPECT_THROW(agreement_pairs({}, floor), EmptyInput);
  EXPECT_THROW(agreement_pairs(rs, 0.0), ConfigError);
  EXPECT_THROW(agreement_pairs(rs, 1.0), ConfigError);
}

TEST(Analysis, WelchWhiteNoiseIsFlatAndParseval) {
  Signal s;
  s.fs_hz = 250.0;
  s.samples.resize(150000);
  RngStream rng(17);
  for (double& v : s.samples) v = 1.3 * rng.normal();
  double var = 0.0, m = 0.0;
  for (double v : s.samples) m += v;
  m /= double(s.samples.size());
  for (double v : s.samples) var += (v - m) * (v - m);
  var /= double(s.samples.size());

  const Psd psd = welch_psd(s, 8.0, 0.5);
  ASSERT_GT(psd.freq_hz.size(), 100u);
  EXPECT_DOUBLE_EQ(psd.freq_hz[0], 0.0);
  const double df = psd.freq_hz[1] - psd.freq_hz[0];
  EXPECT_NEAR(psd.freq_hz.back(), 125.0, 1e-9);

  double total = 0.0;
  for (double d : psd.density) total += d * df;
  EXPECT_NEAR(total, var, 0.05 * var);

  // Flat white spectrum: interior bins stay within a factor of 3.
  double lo = 1e300, hi = 0.0;
  for (std::size_t k = 2; k + 2 < psd.density.size(); ++k) {
    lo = std::min(lo, psd.density[k]);
    hi = std::max(hi, psd.density[k]);
  }
  EXPECT_LT(hi / lo, 3.0);
}

TEST(Analysis, WelchToneConcentratesPower) {
  Signal s;
  s.fs_hz = 250.0;
  s.samples.resize(100000);
  const double amp = 2.0, f0 = 1.0;
  for (std::size_t t = 0; t < s.samples.size(); ++t)
    s.samples[t] = amp * std::sin(2.0 * std::numbers::pi * f0 * double(t) / s.fs_hz);

  const Psd psd = welch_psd(s, 40.0, 0.5);
  const double df = psd.freq_hz[1];
  std::size_t peak = 0;
  for (std::size_t k = 1; k < psd.density.size(); ++k)
    if (psd.density[k] > psd.density[peak]) peak = k;
  EXPECT_NEAR(psd.freq_hz[peak], f0, 2.0 * df);

  double total = 0.0;
  for (double d : psd.density) total += d * df;
  EXPECT_NEAR(total, 0.5 * amp * amp, 0.05 * amp * amp);
}

TEST(Analysis, WelchErrors) {
  Signal s;
  s.fs_hz = 250.0;
  s.samples.assign(1000, 0.1);
  s.samples[1] = 0.2;
  EXPECT_THROW(welch_psd(s, 0.001, 0.5), SignalTooShort);  // nseg < 4
  EXPECT_THROW(welch_psd(s, 100.0, 0.5), SignalTooShort);  // nseg > n
  EXPECT_THROW(welch_psd(s, 2.0, 1.0), ConfigError);
  EXPECT_THROW(welch_psd(s, 2.0, -0.1), ConfigError);
}

}  // namespace
}  // namespace cohtest
