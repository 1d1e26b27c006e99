// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cohtest/dbt.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/glm.hpp"
#include "cohtest/rng.hpp"
#include "cohtest/stats.hpp"
#include "cohtest/surrogate.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

struct BenchConfig {
  std::size_t n_coh_sub = 100;  // targets in the subsampled timing set
  std::vector<std::size_t> n_perm_grid = {100, 200, 500, 1000, 2000, 4000};
  int repeats = 10;  // measured passes per cell, at least 3
  int warmup = 1;    // discarded passes per cell, at least 1
  std::uint64_t seed = 0;

  void validate() const {
    if (n_coh_sub < 1) throw ConfigError("bench: n_coh_sub must be at least 1");
    if (n_perm_grid.empty()) throw ConfigError("bench: n_perm_grid is empty");
    for (std::size_t np : n_perm_grid)
      if (np < 1) throw ConfigError("bench: n_perm values must be at least 1");
    if (repeats < 3) throw ConfigError("bench: repeats must be at least 3");
    if (warmup < 1) throw ConfigError("bench: warmup must be at least 1");
  }
};

enum class BenchMethod { glm, circ, phase };

inline const char* bench_method_name(BenchMethod m) {
  switch (m) {
    case BenchMethod::glm: return "glm";
    case BenchMethod::circ: return "circ";
    default: return "phase";
  }
}

struct BenchSample {
  BenchMethod method = BenchMethod::glm;
  std::size_t n_perm = 0;  // grid value; workload-irrelevant for GLM
  int repeat = 0;
  double seconds = 0.0;
};

struct BenchSummaryRow {
  BenchMethod method = BenchMethod::glm;
  std::size_t n_perm = 0;
  double median_s = 0.0;
  double std_s = 0.0;
  double speedup_vs_glm = 1.0;
  double wilcoxon_p = std::numeric_limits<double>::quiet_NaN();
  double ttest_p = std::numeric_limits<double>::quiet_NaN();
};

struct BenchReport {
  std::vector<BenchSample> samples;
  std::vector<BenchSummaryRow> summary;  // method-major, n_perm ascending
  std::uint64_t input_checksum = 0;
  // p-values produced inside the timed loops; they must match the untimed
  // code path bitwise (timing must not alter results).
  std::vector<double> p_glm;                // per target
  std::vector<std::vector<double>> p_circ;  // [grid index][target]
  std::vector<std::vector<double>> p_phase;
};

struct TimingSignificance {
  BenchMethod method = BenchMethod::circ;  // surrogate side of the pair
  std::size_t n_perm = 0;
  double wilcoxon_p = 1.0;
  double ttest_p = 1.0;
};

namespace detail {

inline std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t bytes) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < bytes; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t checksum_rep(std::uint64_t h, const BandRep& rep) {
  for (std::size_t k = 0; k < rep.bands(); ++k) {
    auto col = rep.column(k);
    h = fnv1a(h, col.data(), col.size() * sizeof(cdouble));
  }
  return h;
}

}  // namespace detail

// Paired comparison of surrogate vs GLM timings at each n_perm: exact
// two-sided Wilcoxon signed-rank and a paired t-test, both on log-seconds.
// Requires at least 6 paired repeats per cell.
inline std::vector<TimingSignificance> significance_of_timings(
    std::span<const BenchSample> samples) {
  auto collect = [&](BenchMethod m, std::size_t np) {
    std::vector<double> out;
    for (const BenchSample& s : samples)
      if (s.method == m && s.n_perm == np) out.push_back(s.seconds);
    return out;
  };
  std::vector<std::size_t> grid;
  for (const BenchSample& s : samples)
    if (std::find(grid.begin(), grid.end(), s.n_perm) == grid.end()) grid.push_back(s.n_perm);

  std::vector<TimingSignificance> out;
  for (std::size_t np : grid) {
    const std::vector<double> t_glm = collect(BenchMethod::glm, np);
    for (BenchMethod m : {BenchMethod::circ, BenchMethod::phase}) {
      const std::vector<double> t_sur = collect(m, np);
      if (t_sur.empty()) continue;
      if (t_glm.size() != t_sur.size() || t_glm.size() < 6)
        throw InsufficientData("significance_of_timings: need at least 6 paired repeats");
      std::vector<double> diffs(t_sur.size());
      for (std::size_t r = 0; r < t_sur.size(); ++r)
        diffs[r] = std::log(t_sur[r]) - std::log(t_glm[r]);
      TimingSignificance ts;
      ts.method = m;
      ts.n_perm = np;
      ts.wilcoxon_p = wilcoxon_signed_rank_p(diffs);
      ts.ttest_p = paired_ttest_p(diffs);
      out.push_back(ts);
    }
  }
  return out;
}

// Wall-clock comparison of the three tests on a fixed subsampled target set.
// Per method x n_perm cell: `warmup` discarded passes, then `repeats` timed
// passes over all targets at the driver's peak band. No I/O inside the timed
// region; surrogate draws are part of the measured work. Single-threaded.
inline BenchReport run_bench(const BandRep& ax, const std::vector<BandRep>& ay_set,
                             const BenchConfig& cfg) {
  cfg.validate();
  if (ay_set.empty()) throw EmptyInput("bench: no targets");
  for (const BandRep& ay : ay_set)
    if (!ax.same_shape(ay)) throw ShapeMismatch("bench: target shape differs from driver");

  const std::size_t band = peak_frequency(ax).first;
  const std::size_t n_targets = ay_set.size();
  const std::size_t n_grid = cfg.n_perm_grid.size();

  BenchReport rep;
  rep.input_checksum = detail::checksum_rep(detail::checksum_rep(14695981039346656037ull, ax),
                                            ay_set.front());
  for (std::size_t i = 1; i < n_targets; ++i)
    rep.input_checksum = detail::checksum_rep(rep.input_checksum, ay_set[i]);
  rep.p_glm.assign(n_targets, 1.0);
  rep.p_circ.assign(n_grid, std::vector<double>(n_targets, 1.0));
  rep.p_phase.assign(n_grid, std::vector<double>(n_targets, 1.0));

  auto surrogate_cfg = [&](SurrogateMethod m, std::size_t np, std::size_t target) {
    SurrogateConfig sc;
    sc.method = m;
    sc.n_perm = np;
    sc.seed = RngStream(cfg.seed).sub(rng_purpose::target).sub(target).u64();
    return sc;
  };

  using clock = std::chrono::steady_clock;
  for (std::size_t gi = 0; gi < n_grid; ++gi) {
    const std::size_t np = cfg.n_perm_grid[gi];
    for (BenchMethod m : {BenchMethod::glm, BenchMethod::circ, BenchMethod::phase}) {
      for (int pass = 0; pass < cfg.warmup + cfg.repeats; ++pass) {
        const auto t0 = clock::now();
        for (std::size_t i = 0; i < n_targets; ++i) {
          if (m == BenchMethod::glm) {
            rep.p_glm[i] = glm_pvalue(ax.column(band), ay_set[i].column(band)).p_value;
          } else if (m == BenchMethod::circ) {
            rep.p_circ[gi][i] =
                surrogate_pvalue(ax, ay_set[i], band,
                                 surrogate_cfg(SurrogateMethod::circular_shift, np, i))
                    .p_value;
          } else {
            rep.p_phase[gi][i] =
                surrogate_pvalue(ax, ay_set[i], band,
                                 surrogate_cfg(SurrogateMethod::phase_randomize, np, i))
                    .p_value;
          }
        }
        const auto t1 = clock::now();
        if (pass >= cfg.warmup)
          rep.samples.push_back(
              {m, np, pass - cfg.warmup, std::chrono::duration<double>(t1 - t0).count()});
      }
    }
  }

  // Summary: method-major rows, medians and dispersions, speedups vs GLM at
  // the same grid value, and paired significance when repeats allow it.
  std::vector<TimingSignificance> sig;
  if (cfg.repeats >= 6) sig = significance_of_timings(rep.samples);
  auto cell = [&](BenchMethod m, std::size_t np) {
    std::vector<double> t;
    for (const BenchSample& s : rep.samples)
      if (s.method == m && s.n_perm == np) t.push_back(s.seconds);
    return t;
  };
  for (BenchMethod m : {BenchMethod::glm, BenchMethod::circ, BenchMethod::phase}) {
    for (std::size_t np : cfg.n_perm_grid) {
      const std::vector<double> t = cell(m, np);
      BenchSummaryRow row;
      row.method = m;
      row.n_perm = np;
      row.median_s = median(t);
      row.std_s = sample_std(t);
      if (m != BenchMethod::glm) {
        row.speedup_vs_glm = row.median_s / median(cell(BenchMethod::glm, np));
        for (const TimingSignificance& ts : sig) {
          if (ts.method == m && ts.n_perm == np) {
            row.wilcoxon_p = ts.wilcoxon_p;
            row.ttest_p = ts.ttest_p;
          }
        }
      }
      rep.summary.push_back(row);
    }
  }
  return rep;
}

}  // namespace cohtest
