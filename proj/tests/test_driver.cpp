// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#include "cohtest/driver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cohtest/csv.hpp"
#include "cohtest/dbt.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/rng.hpp"

namespace cohtest {
namespace {

class TempFile {
 public:
  explicit TempFile(const std::string& name) : path_(::testing::TempDir() + name) {}
  ~TempFile() { std::remove(path_.c_str()); }
  void write(const std::string& text) {
    std::ofstream out(path_, std::ios::binary);
    out << text;
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

double signal_mean(const Signal& s) {
  double m = 0.0;
  for (double v : s.samples) m += v;
  return m / double(s.samples.size());
}

double signal_var(const Signal& s) {
  const double m = signal_mean(s);
  double v = 0.0;
  for (double x : s.samples) v += (x - m) * (x - m);
  return v / double(s.samples.size());
}

TEST(Driver, JitterFreeSpecIsAPureTone) {
  DriverSpec spec;
  spec.duration_s = 120.0;
  spec.amp_jitter = 0.0;
  spec.freq_jitter = 0.0;
  const Signal x = make_driver(spec, RngStream(1));
  ASSERT_EQ(x.samples.size(), 30000u);

  // Projection onto the 0.3 Hz quadrature pair captures almost everything.
  const double w = 2.0 * std::numbers::pi * 0.3 / x.fs_hz;
  double ps = 0.0, pc = 0.0, es = 0.0, ec = 0.0, ex = 0.0;
  for (std::size_t t = 0; t < x.samples.size(); ++t) {
    const double u = std::sin(w * double(t)), v = std::cos(w * double(t));
    ps += x.samples[t] * u;
    pc += x.samples[t] * v;
    es += u * u;
    ec += v * v;
    ex += x.samples[t] * x.samples[t];
  }
  const double captured = ps * ps / es + pc * pc / ec;
  EXPECT_GT(captured / ex, 0.999);

  const BandRep rep = decompose(x, BandParams{});
  EXPECT_NEAR(peak_frequency(rep).second, 0.3, 1e-12);
}

TEST(Driver, SeedDeterminismAndValueSemantics) {
  DriverSpec spec;
  spec.duration_s = 60.0;
  RngStream rng(42);
  const Signal a = make_driver(spec, rng);
  const Signal b = make_driver(spec, rng);  // stream passed by value: same state
  ASSERT_EQ(a.samples.size(), b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) ASSERT_EQ(a.samples[i], b.samples[i]);

  const Signal c = make_driver(spec, RngStream(43));
  double diff = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) diff += std::fabs(a.samples[i] - c.samples[i]);
  EXPECT_GT(diff, 1.0);
}

TEST(Driver, OutputIsZScored) {
  DriverSpec spec;
  spec.duration_s = 90.0;
  const Signal x = make_driver(spec, RngStream(7));
  EXPECT_NEAR(signal_mean(x), 0.0, 1e-12);
  EXPECT_NEAR(signal_var(x), 1.0, 1e-9);
}

TEST(Driver, SpectrumPeaksAtBreathingBandAndStaysQuietAboveIt) {
  DriverSpec spec;  // defaults: 367 s, jitter on
  const Signal x = make_driver(spec, RngStream(11));
  const BandRep rep = decompose(x, BandParams{});
  const auto [peak, peak_hz] = peak_frequency(rep);
  EXPECT_NEAR(peak_hz, 0.3, 0.05 + 1e-12);

  // Power at 1.0 Hz is only the injected broadband floor, 35 dB down.
  std::size_t control = 0;
  for (std::size_t k = 0; k < rep.bands(); ++k)
    if (std::fabs(rep.center_hz(k) - 1.0) < 1e-9) control = k;
  ASSERT_GT(control, 0u);
  EXPECT_LT(band_power(rep, control) / band_power(rep, peak), 5e-3);
  EXPECT_GT(band_power(rep, control), 0.0);  // the floor is present
}

TEST(Driver, FrequencyJitterAloneKeepsPeak) {
  DriverSpec spec;
  spec.duration_s = 120.0;
  spec.amp_jitter = 0.0;  // no flutter, no floor
  const Signal x = make_driver(spec, RngStream(13));
  const BandRep rep = decompose(x, BandParams{});
  EXPECT_NEAR(peak_frequency(rep).second, 0.3, 0.05 + 1e-12);
}

TEST(Driver, ValidateRejectsBadSpecs) {
  DriverSpec spec;
  spec.fs_hz = 0.0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.duration_s = 0.0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.f_br_hz = 0.0;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.f_br_hz = 125.0;  // at Nyquist
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.amp_jitter = -0.1;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec = {};
  spec.source = DriverSource::csv_file;
  spec.csv_path = "";
  EXPECT_THROW(spec.validate(), ConfigError);
}

TEST(Driver, CsvValueColumn) {
  TempFile tmp("cohtest_driver_value.csv");
  std::string text = "value\n";
  for (int i = 0; i < 500; ++i)
    text += format_double(std::sin(0.1 * i) + 2.0) + "\n";
  tmp.write(text);

  const Signal s = load_signal_csv(tmp.path(), 250.0);
  EXPECT_EQ(s.samples.size(), 500u);
  EXPECT_DOUBLE_EQ(s.fs_hz, 250.0);
  EXPECT_NEAR(signal_mean(s), 0.0, 1e-12);
  EXPECT_NEAR(signal_var(s), 1.0, 1e-9);

  DriverSpec spec;
  spec.source = DriverSource::csv_file;
  spec.csv_path = tmp.path();
  spec.fs_hz = 250.0;
  const Signal via_driver = make_driver(spec, RngStream(0));
  ASSERT_EQ(via_driver.samples.size(), s.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i)
    EXPECT_EQ(via_driver.samples[i], s.samples[i]);
}

TEST(Driver, CsvTimeValueDerivesRate) {
  TempFile tmp("cohtest_driver_tv.csv");
  std::string text = "time_s,value\n";
  for (int i = 0; i < 400; ++i)
    text += format_double(i * 0.004) + "," + format_double(std::cos(0.05 * i)) + "\n";
  tmp.write(text);
  const Signal s = load_signal_csv(tmp.path(), 1.0);  // hint must be ignored
  EXPECT_EQ(s.samples.size(), 400u);
  EXPECT_NEAR(s.fs_hz, 250.0, 1e-6);
}

TEST(Driver, CsvErrors) {
  // Non-uniform time column.
  {
    TempFile tmp("cohtest_driver_nonuniform.csv");
    tmp.write("time_s,value\n0,1\n0.004,2\n0.009,1\n0.012,3\n");
    EXPECT_THROW(load_signal_csv(tmp.path(), 250.0), DriverLoadError);
  }
  // Unknown header layout.
  {
    TempFile tmp("cohtest_driver_badheader.csv");
    tmp.write("t,v\n0,1\n1,2\n");
    EXPECT_THROW(load_signal_csv(tmp.path(), 250.0), DriverLoadError);
  }
  // Constant signal cannot be z-scored.
  {
    TempFile tmp("cohtest_driver_const.csv");
    tmp.write("value\n3\n3\n3\n3\n");
    EXPECT_THROW(load_signal_csv(tmp.path(), 250.0), DriverLoadError);
  }
  // Too few samples.
  {
    TempFile tmp("cohtest_driver_short.csv");
    tmp.write("value\n1\n");
    EXPECT_THROW(load_signal_csv(tmp.path(), 250.0), DriverLoadError);
  }
  // Missing file.
  EXPECT_THROW(load_signal_csv(::testing::TempDir() + "cohtest_no_such.csv", 250.0),
               DriverLoadError);
  // Bad numeric field.
  {
    TempFile tmp("cohtest_driver_nan_field.csv");
    tmp.write("value\n1\ntwo\n3\n");
    EXPECT_THROW(load_signal_csv(tmp.path(), 250.0), DriverLoadError);
  }
}

}  // namespace
}  // namespace cohtest
