// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>

namespace cohtest {

// Base type for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Signal shorter than the bandwidth can resolve (B * duration < 2).
struct SignalTooShort : Error { using Error::Error; };
// Band range with high <= low, or outside what the sample rate supports.
struct InvalidBandRange : Error { using Error::Error; };
// Peak requested on an all-zero representation.
struct NoPeak : Error { using Error::Error; };
// Band or row index out of range.
struct BadIndex : Error { using Error::Error; };
// Two representations (or columns) that should agree in shape do not.
struct ShapeMismatch : Error { using Error::Error; };
// Regression predictor with zero energy.
struct DegeneratePredictor : Error { using Error::Error; };
// Circular shift lag outside [0, T).
struct BadLag : Error { using Error::Error; };
// Driver file missing or malformed.
struct DriverLoadError : Error { using Error::Error; };
// Target coherence outside the open interval (0, 1).
struct BadTarget : Error { using Error::Error; };
// Analysis routine handed an empty collection.
struct EmptyInput : Error { using Error::Error; };
// Too few samples for the requested statistic.
struct InsufficientData : Error { using Error::Error; };
// Invalid or unparsable run configuration.
struct ConfigError : Error { using Error::Error; };

}  // namespace cohtest
