// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cohtest/bench.hpp"
#include "cohtest/driver.hpp"
#include "cohtest/errors.hpp"
#include "cohtest/surrogate.hpp"
#include "cohtest/sweep.hpp"
#include "cohtest/types.hpp"

namespace cohtest {

struct AnalysisConfig {
  double alpha = 0.05;
  double bin_width = 0.025;
  double control_freq_hz = 1.0;
  double psd_segment_s = 40.0;
  double psd_overlap = 0.5;

  void validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ConfigError("analysis: alpha must be in (0, 1)");
    if (!(bin_width > 0.0) || bin_width > 1.0)
      throw ConfigError("analysis: bin_width must be in (0, 1]");
    if (control_freq_hz < 0.0) throw ConfigError("analysis: control_freq_hz must be nonnegative");
    if (!(psd_segment_s > 0.0)) throw ConfigError("analysis: psd_segment_s must be positive");
    if (!(psd_overlap >= 0.0) || psd_overlap >= 1.0)
      throw ConfigError("analysis: psd_overlap must be in [0, 1)");
  }
};

// Default target grid: density concentrated in the low-coherence region
// where the methods differ, the rest spread to saturation.
inline std::vector<double> default_c_grid(std::size_t n) {
  if (n == 0) throw ConfigError("sweep: need at least 1 target");
  if (n == 1) return {0.5};
  auto linspace = [](double a, double b, std::size_t k, std::vector<double>& out) {
    if (k == 0) return;
    if (k == 1) {
      out.push_back(a);
      return;
    }
    for (std::size_t i = 0; i < k; ++i)
      out.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(k - 1));
  };
  std::size_t n_lo = static_cast<std::size_t>(std::llround(0.55 * static_cast<double>(n)));
  n_lo = std::min(std::max<std::size_t>(n_lo, 1), n - 1);
  std::vector<double> grid;
  grid.reserve(n);
  linspace(0.02, 0.40, n_lo, grid);
  linspace(n - n_lo == 1 ? 0.999 : 0.41, 0.999, n - n_lo, grid);
  return grid;
}

// Everything one run needs; defaults reproduce the reference setup
// (B = 0.2 Hz, range 0-1.2 Hz, U_fx = 3, n_perm = 2000, alpha = 0.05,
// control band at 1.0 Hz) at a 100-target scale.
struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  DriverSpec driver;
  BandParams bands;
  std::size_t sweep_targets = 100;
  std::vector<double> c_true_grid;  // explicit grid; empty = default_c_grid(sweep_targets)
  SurrogateConfig surrogate;
  AnalysisConfig analysis;
  BenchConfig bench;
  std::string output_dir = ".";

  SweepConfig sweep_config() const {
    SweepConfig sc;
    sc.c_true_grid = c_true_grid.empty() ? default_c_grid(sweep_targets) : c_true_grid;
    sc.seed = seed;
    sc.band_params = bands;
    return sc;
  }

  void validate() const {
    if (threads < 1) throw ConfigError("threads must be at least 1");
    driver.validate();
    bands.validate();
    if (sweep_targets < 1) throw ConfigError("sweep: need at least 1 target");
    surrogate.validate();
    analysis.validate();
    bench.validate();
    if (analysis.control_freq_hz > 0.5 * driver.fs_hz)
      throw ConfigError("analysis: control_freq_hz exceeds Nyquist");
    if (output_dir.empty()) throw ConfigError("output: dir must not be empty");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

inline double cfg_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: bad number for '" + key + "': '" + v + "'");
  return out;
}

inline std::uint64_t cfg_u64(const std::string& v, const std::string& key) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: bad unsigned integer for '" + key + "': '" + v + "'");
  return out;
}

inline bool cfg_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for '" + key + "': '" + v + "'");
}

template <typename T, typename Parse>
std::vector<T> cfg_list(const std::string& v, const std::string& key, Parse parse) {
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t pos = v.find(',', start);
    if (pos == std::string::npos) pos = v.size();
    const std::string item = trim(v.substr(start, pos - start));
    if (!item.empty()) out.push_back(parse(item, key));
    start = pos + 1;
  }
  if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
  return out;
}

}  // namespace detail

// Parse the sectioned key-value format. Unknown sections or keys are errors;
// '#' and ';' start comments; keys before any section header are top-level.
inline RunConfig parse_config_text(const std::string& text) {
  RunConfig rc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section != "driver" && section != "bands" && section != "sweep" &&
          section != "surrogate" && section != "analysis" && section != "bench" &&
          section != "output")
        throw ConfigError("config: unknown section '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    const std::string qual = section.empty() ? key : section + "." + key;

    if (qual == "seed") rc.seed = detail::cfg_u64(val, qual);
    else if (qual == "threads") rc.threads = static_cast<int>(detail::cfg_u64(val, qual));
    else if (qual == "driver.source") {
      if (val == "synthetic") rc.driver.source = DriverSource::synthetic;
      else if (val == "csv_file") rc.driver.source = DriverSource::csv_file;
      else throw ConfigError("config: driver.source must be synthetic or csv_file");
    }
    else if (qual == "driver.csv_path") rc.driver.csv_path = val;
    else if (qual == "driver.duration_s") rc.driver.duration_s = detail::cfg_double(val, qual);
    else if (qual == "driver.fs_hz") rc.driver.fs_hz = detail::cfg_double(val, qual);
    else if (qual == "driver.f_br_hz") rc.driver.f_br_hz = detail::cfg_double(val, qual);
    else if (qual == "driver.amp_jitter") rc.driver.amp_jitter = detail::cfg_double(val, qual);
    else if (qual == "driver.freq_jitter") rc.driver.freq_jitter = detail::cfg_double(val, qual);
    else if (qual == "bands.bandwidth_hz") rc.bands.bandwidth_hz = detail::cfg_double(val, qual);
    else if (qual == "bands.range_low_hz") rc.bands.range_low_hz = detail::cfg_double(val, qual);
    else if (qual == "bands.range_high_hz") rc.bands.range_high_hz = detail::cfg_double(val, qual);
    else if (qual == "bands.upsample_fx")
      rc.bands.upsample_fx = static_cast<int>(detail::cfg_u64(val, qual));
    else if (qual == "bands.taper") {
      if (val == "raised_cosine") rc.bands.taper = Taper::raised_cosine;
      else if (val == "rectangular") rc.bands.taper = Taper::rectangular;
      else throw ConfigError("config: bands.taper must be raised_cosine or rectangular");
    }
    else if (qual == "sweep.targets")
      rc.sweep_targets = static_cast<std::size_t>(detail::cfg_u64(val, qual));
    else if (qual == "sweep.c_true_grid")
      rc.c_true_grid = detail::cfg_list<double>(val, qual, detail::cfg_double);
    else if (qual == "surrogate.method") {
      if (val == "circular_shift") rc.surrogate.method = SurrogateMethod::circular_shift;
      else if (val == "phase_randomize") rc.surrogate.method = SurrogateMethod::phase_randomize;
      else throw ConfigError("config: surrogate.method must be circular_shift or phase_randomize");
    }
    else if (qual == "surrogate.n_perm")
      rc.surrogate.n_perm = static_cast<std::size_t>(detail::cfg_u64(val, qual));
    else if (qual == "surrogate.add_one") rc.surrogate.add_one = detail::cfg_bool(val, qual);
    else if (qual == "analysis.alpha") rc.analysis.alpha = detail::cfg_double(val, qual);
    else if (qual == "analysis.bin_width") rc.analysis.bin_width = detail::cfg_double(val, qual);
    else if (qual == "analysis.control_freq_hz")
      rc.analysis.control_freq_hz = detail::cfg_double(val, qual);
    else if (qual == "analysis.psd_segment_s")
      rc.analysis.psd_segment_s = detail::cfg_double(val, qual);
    else if (qual == "analysis.psd_overlap")
      rc.analysis.psd_overlap = detail::cfg_double(val, qual);
    else if (qual == "bench.n_coh_sub")
      rc.bench.n_coh_sub = static_cast<std::size_t>(detail::cfg_u64(val, qual));
    else if (qual == "bench.n_perm_grid")
      rc.bench.n_perm_grid = detail::cfg_list<std::size_t>(
          val, qual, [](const std::string& s, const std::string& k) {
            return static_cast<std::size_t>(detail::cfg_u64(s, k));
          });
    else if (qual == "bench.repeats") rc.bench.repeats = static_cast<int>(detail::cfg_u64(val, qual));
    else if (qual == "bench.warmup") rc.bench.warmup = static_cast<int>(detail::cfg_u64(val, qual));
    else if (qual == "output.dir") rc.output_dir = val;
    else throw ConfigError("config: unknown key '" + qual + "'");
  }
  return rc;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace cohtest
