// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "cohtest/errors.hpp"

namespace cohtest {

inline double mean(std::span<const double> v) {
  if (v.empty()) throw EmptyInput("mean of empty collection");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator); 0 for a single value.
inline double sample_std(std::span<const double> v) {
  if (v.empty()) throw EmptyInput("std of empty collection");
  if (v.size() == 1) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double median(std::vector<double> v) {
  if (v.empty()) throw EmptyInput("median of empty collection");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Kolmogorov-Smirnov statistic of a sample against Unif(0, 1).
inline double ks_uniform_stat(std::vector<double> sample) {
  if (sample.empty()) throw EmptyInput("ks statistic of empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(sample[i] - lo, hi - sample[i]));
  }
  return d;
}

// Kolmogorov survival function Q(lambda) = 2 * sum_j (-1)^{j-1} exp(-2 j^2 lambda^2).
inline double ks_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Asymptotic two-sample KS p-value (with the usual small-sample correction).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw EmptyInput("two-sample ks needs both samples nonempty");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return ks_survival((ne + 0.12 + 0.11 / ne) * d);
}

namespace detail {

// Continued fraction for the regularized incomplete beta (modified Lentz).
inline double betacf(double a, double b, double x) {
  constexpr double eps = 3e-14;
  constexpr double fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * detail::betacf(a, b, x) / a;
  return 1.0 - bt * detail::betacf(b, a, 1.0 - x) / b;
}

// Exact two-sided Wilcoxon signed-rank p-value for paired differences.
// Zero differences are dropped; tied magnitudes get average ranks. The exact
// null distribution is enumerated by dynamic programming over doubled ranks
// (average ranks are half-integers). All differences zero gives p = 1.
inline double wilcoxon_signed_rank_p(std::span<const double> diffs) {
  std::vector<double> abs_d;
  std::vector<bool> positive;
  for (double d : diffs) {
    if (d == 0.0) continue;
    abs_d.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  const std::size_t n = abs_d.size();
  if (n == 0) return 1.0;

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t u, std::size_t v) { return abs_d[u] < abs_d[v]; });
  std::vector<long> rank2(n);  // rank * 2, so average ranks stay integral
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && abs_d[order[j]] == abs_d[order[i]]) ++j;
    const long sum2 = static_cast<long>((i + 1 + j) * (j - i));  // 2 * sum of ranks i+1..j
    const long avg2 = sum2 / static_cast<long>(j - i);
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = avg2;
    i = j;
  }

  long w2_obs = 0;
  long w2_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    w2_max += rank2[i];
    if (positive[i]) w2_obs += rank2[i];
  }
  std::vector<double> count(static_cast<std::size_t>(w2_max) + 1, 0.0);
  count[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (long w = w2_max; w >= rank2[i]; --w)
      count[static_cast<std::size_t>(w)] += count[static_cast<std::size_t>(w - rank2[i])];
  }
  const double total = std::ldexp(1.0, static_cast<int>(n));
  double lower = 0.0, upper = 0.0;
  for (long w = 0; w <= w2_max; ++w) {
    if (w <= w2_obs) lower += count[static_cast<std::size_t>(w)];
    if (w >= w2_obs) upper += count[static_cast<std::size_t>(w)];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

// Two-sided paired t-test p-value on the differences.
inline double paired_ttest_p(std::span<const double> diffs) {
  if (diffs.size() < 2) throw InsufficientData("paired t-test: need at least 2 pairs");
  const double n = static_cast<double>(diffs.size());
  const double m = mean(diffs);
  const double s = sample_std(diffs);
  if (s == 0.0) return m == 0.0 ? 1.0 : 0.0;
  const double t = m / (s / std::sqrt(n));
  const double df = n - 1.0;
  return betai(0.5 * df, 0.5, df / (df + t * t));
}

}  // namespace cohtest
