// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cohtest {

using cdouble = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

// Forward twiddles e^{-2*pi*i*j/n} for j < n/2, cached per size.
// thread_local avoids locking; each worker pays the table once.
inline const std::vector<cdouble>& twiddles(std::size_t n) {
  thread_local std::unordered_map<std::size_t, std::unique_ptr<std::vector<cdouble>>> cache;
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<std::vector<cdouble>>(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
      double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      (*slot)[j] = {std::cos(ang), std::sin(ang)};
    }
  }
  return *slot;
}

// In-place iterative radix-2; n must be a power of two.
inline void fft_pow2(std::span<cdouble> a, bool inverse) {
  const std::size_t n = a.size();
  if (n < 2) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {  // bit-reversal permutation
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto& tw = twiddles(n);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        cdouble w = tw[j * step];
        if (inverse) w = std::conj(w);
        cdouble u = a[i + j];
        cdouble v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

}  // namespace detail

// Forward DFT of arbitrary length (Bluestein for non powers of two).
inline std::vector<cdouble> fft(std::vector<cdouble> a) {
  const std::size_t n = a.size();
  if (n == 0) return a;
  if ((n & (n - 1)) == 0) {
    detail::fft_pow2(a, false);
    return a;
  }
  // Bluestein: X_k = conj(c_k) * (u * v)_k with chirp c_j = e^{i*pi*j^2/n}.
  // j^2 mod 2n keeps the phase argument exact in double precision.
  const std::size_t m = next_pow2(2 * n - 1);
  std::vector<cdouble> chirp(n), u(m), v(m);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t q = (static_cast<std::uint64_t>(j) * j) % (2 * n);
    double ang = std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
    chirp[j] = {std::cos(ang), std::sin(ang)};
    u[j] = a[j] * std::conj(chirp[j]);
  }
  v[0] = chirp[0];
  for (std::size_t j = 1; j < n; ++j) v[j] = v[m - j] = chirp[j];
  detail::fft_pow2(u, false);
  detail::fft_pow2(v, false);
  for (std::size_t j = 0; j < m; ++j) u[j] *= v[j];
  detail::fft_pow2(u, true);
  std::vector<cdouble> out(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) out[k] = std::conj(chirp[k]) * (u[k] * inv_m);
  return out;
}

// Inverse DFT of arbitrary length, 1/n normalized.
inline std::vector<cdouble> ifft(std::vector<cdouble> a) {
  const std::size_t n = a.size();
  if (n == 0) return a;
  for (auto& z : a) z = std::conj(z);
  a = fft(std::move(a));
  const double inv_n = 1.0 / static_cast<double>(n);
  for (auto& z : a) z = std::conj(z) * inv_n;
  return a;
}

// One-sided spectrum of a real signal zero-padded to nfft (a power of two):
// bins 0..nfft/2 via one complex FFT of half length.
inline std::vector<cdouble> rfft(std::span<const double> x, std::size_t nfft) {
  const std::size_t half = nfft / 2;
  if (half == 0) return {cdouble(x.empty() ? 0.0 : x[0], 0.0)};
  std::vector<cdouble> z(half);
  const std::size_t n = x.size() < nfft ? x.size() : nfft;
  for (std::size_t j = 0; 2 * j < n; ++j) {
    double re = x[2 * j];
    double im = (2 * j + 1 < n) ? x[2 * j + 1] : 0.0;
    z[j] = {re, im};
  }
  detail::fft_pow2(z, false);
  std::vector<cdouble> out(half + 1);
  const auto& tw = detail::twiddles(nfft);  // e^{-2*pi*i*k/nfft}, k < nfft/2
  for (std::size_t k = 0; k <= half; ++k) {
    cdouble zk = (k == half) ? z[0] : z[k];
    cdouble zmk = std::conj((k == 0 || k == half) ? z[0] : z[half - k]);
    cdouble even = 0.5 * (zk + zmk);
    cdouble odd = cdouble(0.0, -0.5) * (zk - zmk);
    out[k] = even + (k == half ? cdouble(-1.0, 0.0) : tw[k]) * odd;
  }
  return out;
}

}  // namespace cohtest
