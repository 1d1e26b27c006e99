// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cohtest/errors.hpp"

namespace cohtest {

using cdouble = std::complex<double>;

enum class Taper { raised_cosine, rectangular };

// Filter-bank configuration: bandwidth B, analysis range, and the
// frequency upsampling factor U_fx that sets band-center density.
struct BandParams {
  double bandwidth_hz = 0.2;
  double range_low_hz = 0.0;
  double range_high_hz = 1.2;
  int upsample_fx = 3;
  Taper taper = Taper::raised_cosine;

  double spacing_hz() const { return bandwidth_hz / (upsample_fx + 1); }

  void validate() const {
    if (!(bandwidth_hz > 0.0)) throw InvalidBandRange("bandwidth_hz must be positive");
    if (!(range_high_hz > range_low_hz) || range_low_hz < 0.0)
      throw InvalidBandRange("band range must satisfy high > low >= 0");
    if (upsample_fx < 1) throw InvalidBandRange("upsample_fx must be >= 1");
  }
};

// A real time series with its sample rate.
struct Signal {
  std::vector<double> samples;
  double fs_hz = 0.0;

  double duration_s() const { return static_cast<double>(samples.size()) / fs_hz; }

  void validate() const {
    if (!(fs_hz > 0.0)) throw InvalidBandRange("fs_hz must be positive");
    if (samples.size() < 2) throw SignalTooShort("signal needs at least 2 samples");
    for (double v : samples)
      if (!std::isfinite(v)) throw Error("signal contains non-finite samples");
  }
};

// Complex narrowband coefficients, T time rows by F band columns.
// Storage is band-major so one band's T samples are contiguous.
class BandRep {
 public:
  BandRep() = default;
  BandRep(std::size_t rows, std::vector<double> centers_hz, double dt_s)
      : rows_(rows),
        centers_hz_(std::move(centers_hz)),
        dt_s_(dt_s),
        data_(rows * centers_hz_.size()) {}

  std::size_t rows() const { return rows_; }
  std::size_t bands() const { return centers_hz_.size(); }
  double dt_s() const { return dt_s_; }
  const std::vector<double>& centers_hz() const { return centers_hz_; }

  double center_hz(std::size_t band) const {
    check_band(band);
    return centers_hz_[band];
  }

  cdouble& at(std::size_t t, std::size_t band) {
    check_cell(t, band);
    return data_[band * rows_ + t];
  }
  cdouble at(std::size_t t, std::size_t band) const {
    check_cell(t, band);
    return data_[band * rows_ + t];
  }

  std::span<cdouble> column(std::size_t band) {
    check_band(band);
    return {data_.data() + band * rows_, rows_};
  }
  std::span<const cdouble> column(std::size_t band) const {
    check_band(band);
    return {data_.data() + band * rows_, rows_};
  }

  bool same_shape(const BandRep& other) const {
    return rows_ == other.rows_ && centers_hz_ == other.centers_hz_;
  }

 private:
  void check_band(std::size_t band) const {
    if (band >= centers_hz_.size()) throw BadIndex("band index out of range");
  }
  void check_cell(std::size_t t, std::size_t band) const {
    check_band(band);
    if (t >= rows_) throw BadIndex("time index out of range");
  }

  std::size_t rows_ = 0;
  std::vector<double> centers_hz_;
  double dt_s_ = 0.0;
  std::vector<cdouble> data_;
};

}  // namespace cohtest
