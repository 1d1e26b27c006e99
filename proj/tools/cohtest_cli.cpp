// Copyright 2026 The cohtest authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: simulate | test | power | roc | agreement | bench.
// Exit codes: 0 success, 2 configuration/input problems, 1 runtime failures.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohtest/cohtest.hpp"

namespace fs = std::filesystem;
using namespace cohtest;

namespace {

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::uint64_t nperm = 0;
  bool nperm_set = false;
  double alpha = 0.0;
  bool alpha_set = false;
};

RunConfig effective_config(const CliOverrides& ov) {
  RunConfig rc = ov.config_path.empty() ? RunConfig{} : load_config(ov.config_path);
  if (ov.seed_set) rc.seed = ov.seed;
  if (!ov.out_dir.empty()) rc.output_dir = ov.out_dir;
  if (ov.threads > 0) rc.threads = ov.threads;
  if (ov.nperm_set) rc.surrogate.n_perm = static_cast<std::size_t>(ov.nperm);
  if (ov.alpha_set) rc.analysis.alpha = ov.alpha;
  rc.bench.seed = rc.seed;
  rc.validate();
  return rc;
}

std::string out_path(const RunConfig& rc, const char* name) {
  fs::create_directories(rc.output_dir);
  return (fs::path(rc.output_dir) / name).string();
}

void print_seed(const RunConfig& rc) {
  std::printf("seed: %llu\n", static_cast<unsigned long long>(rc.seed));
}

void write_sweep_file(const std::string& path, const std::vector<SweepRecord>& records) {
  CsvWriter w(sweep_csv_header());
  for (const SweepRecord& r : records) w.add_row(sweep_csv_row(r));
  w.save(path);
}

int cmd_simulate(const CliOverrides& ov) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  const SweepResult res =
      run_sweep(rc.driver, rc.sweep_config(), rc.surrogate, rc.analysis.control_freq_hz, rc.threads);

  // Diagnostic PSDs: the driver and the observation nearest c_true = 0.6,
  // regenerated from the same per-target substream the sweep used.
  const Signal x = make_driver(rc.driver, RngStream(rc.seed).sub(rng_purpose::driver));
  const SweepConfig sc = rc.sweep_config();
  std::size_t pick = 0;
  for (std::size_t i = 1; i < sc.c_true_grid.size(); ++i)
    if (std::fabs(sc.c_true_grid[i] - 0.6) < std::fabs(sc.c_true_grid[pick] - 0.6)) pick = i;
  RngStream noise_rng = RngStream(rc.seed).sub(rng_purpose::noise).sub(pick);
  const Observation obs = make_observation(x, sc.c_true_grid[pick], rc.bands, noise_rng);
  const double seg_s = std::min(rc.analysis.psd_segment_s, x.duration_s());
  const Psd psd_x = welch_psd(x, seg_s, rc.analysis.psd_overlap);
  const Psd psd_y = welch_psd(obs.y, seg_s, rc.analysis.psd_overlap);

  write_sweep_file(out_path(rc, "sweep.csv"), res.records);
  write_sweep_file(out_path(rc, "sweep_control.csv"), res.control);
  CsvWriter w({"freq_hz", "psd_x", "psd_y"});
  for (std::size_t k = 0; k < psd_x.freq_hz.size(); ++k)
    w.add_row({format_double(psd_x.freq_hz[k]), format_double(psd_x.density[k]),
               format_double(psd_y.density[k])});
  w.save(out_path(rc, "psd.csv"));

  std::printf("driver peak: %g Hz (band %zu), control: %g Hz (band %zu)\n", res.f_br_hz,
              res.f_br_band, res.control_hz, res.control_band);
  std::printf("wrote %zu records to %s\n", res.records.size(), rc.output_dir.c_str());
  return 0;
}

int cmd_test(const CliOverrides& ov, const std::string& driver_csv,
             const std::string& observation_csv) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  const Signal x = load_signal_csv(driver_csv, rc.driver.fs_hz);
  const Signal y = load_signal_csv(observation_csv, rc.driver.fs_hz);
  if (x.samples.size() != y.samples.size() || x.fs_hz != y.fs_hz)
    throw DriverLoadError("test: driver and observation must share duration and sample rate");
  const BandRep ax = decompose(x, rc.bands);
  const BandRep ay = decompose(y, rc.bands);

  const CoherenceSpectrum coh = coherence(ax, ay);
  const std::vector<GlmTestResult> glm = glm_spectrum(ax, ay);
  SurrogateConfig sc_circ = rc.surrogate;
  sc_circ.method = SurrogateMethod::circular_shift;
  sc_circ.seed = rc.seed;
  SurrogateConfig sc_phase = rc.surrogate;
  sc_phase.method = SurrogateMethod::phase_randomize;
  sc_phase.seed = rc.seed;
  std::vector<double> p_circ(ax.bands()), p_phase(ax.bands());
  parallel_for(ax.bands(), rc.threads, [&](std::size_t k) {
    p_circ[k] = surrogate_pvalue(ax, ay, k, sc_circ).p_value;
    p_phase[k] = surrogate_pvalue(ax, ay, k, sc_phase).p_value;
  });

  CsvWriter w({"band_hz", "c_obs", "p_glm", "p_circ", "p_phase"});
  for (std::size_t k = 0; k < ax.bands(); ++k)
    w.add_row({format_double(ax.center_hz(k)), format_double(coh.values[k]),
               format_double(glm[k].p_value), format_double(p_circ[k]),
               format_double(p_phase[k])});
  w.save(out_path(rc, "test.csv"));
  std::printf("wrote %zu bands to %s\n", ax.bands(), rc.output_dir.c_str());
  return 0;
}

int cmd_power(const CliOverrides& ov, const std::string& sweep_csv) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  const std::vector<SweepRecord> records = read_sweep_csv(sweep_csv);
  const PowerCurve pc = power_curve(records, rc.analysis.alpha, rc.analysis.bin_width);

  CsvWriter w({"bin_center", "n", "rate_glm", "rate_circ", "rate_phase"});
  for (std::size_t j = 0; j < pc.bin_centers.size(); ++j)
    w.add_row({format_double(pc.bin_centers[j]), std::to_string(pc.bin_counts[j]),
               format_double(pc.rate_glm[j]), format_double(pc.rate_circ[j]),
               format_double(pc.rate_phase[j])});
  w.save(out_path(rc, "power_curve.csv"));

  CsvWriter ws({"method", "c50", "c80", "c90", "snr_at_80_db"});
  auto threshold_row = [&](const char* name, const MethodThresholds& th) {
    ws.add_row({name, format_double(th.c50), format_double(th.c80), format_double(th.c90),
                format_double(th.snr_at_80_db)});
  };
  threshold_row("glm", pc.glm);
  threshold_row("circ", pc.circ);
  threshold_row("phase", pc.phase);
  ws.save(out_path(rc, "power_thresholds.csv"));
  std::printf("power curve over %zu bins; glm c80=%g circ c80=%g phase c80=%g\n",
              pc.bin_centers.size(), pc.glm.c80, pc.circ.c80, pc.phase.c80);
  return 0;
}

int cmd_roc(const CliOverrides& ov, const std::string& sweep_csv, std::string control_csv) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  if (control_csv.empty())
    control_csv = (fs::path(sweep_csv).parent_path() / "sweep_control.csv").string();
  const std::vector<SweepRecord> pos = read_sweep_csv(sweep_csv);
  const std::vector<SweepRecord> neg = read_sweep_csv(control_csv);
  if (pos.size() < 2 || neg.size() < 2)
    throw InsufficientData("roc: need at least 2 records per class");

  auto pick = [](const std::vector<SweepRecord>& rs, double SweepRecord::* field) {
    std::vector<double> out;
    out.reserve(rs.size());
    for (const SweepRecord& r : rs) out.push_back(r.*field);
    return out;
  };
  CsvWriter w({"method", "fpr", "tpr"});
  CsvWriter wa({"method", "auc", "control_freq_hz"});
  const double control_hz = neg.front().f_br_hz;
  for (auto [name, field] : std::initializer_list<std::pair<const char*, double SweepRecord::*>>{
           {"glm", &SweepRecord::p_glm},
           {"circ", &SweepRecord::p_circ},
           {"phase", &SweepRecord::p_phase}}) {
    const RocCurve rcurve = roc(pick(pos, field), pick(neg, field));
    for (std::size_t k = 0; k < rcurve.fpr.size(); ++k)
      w.add_row({name, format_double(rcurve.fpr[k]), format_double(rcurve.tpr[k])});
    wa.add_row({name, format_double(rcurve.auc), format_double(control_hz)});
    std::printf("auc %s = %.4f\n", name, rcurve.auc);
  }
  w.save(out_path(rc, "roc.csv"));
  wa.save(out_path(rc, "roc_auc.csv"));
  return 0;
}

int cmd_agreement(const CliOverrides& ov, const std::string& sweep_csv) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  const std::vector<SweepRecord> records = read_sweep_csv(sweep_csv);
  const double floor = 1.0 / static_cast<double>(rc.surrogate.n_perm + 1);
  const std::vector<AgreementPair> pairs = agreement_pairs(records, floor);
  CsvWriter w({"neg_log10_p_glm", "neg_log10_p_phase", "c_obs"});
  for (const AgreementPair& a : pairs)
    w.add_row({format_double(a.neg_log10_p_glm), format_double(a.neg_log10_p_phase),
               format_double(a.c_obs)});
  w.save(out_path(rc, "agreement.csv"));
  std::printf("wrote %zu pairs (cap %.4f)\n", pairs.size(), -std::log10(floor));
  return 0;
}

int cmd_bench(const CliOverrides& ov) {
  const RunConfig rc = effective_config(ov);
  print_seed(rc);
  const Signal x = make_driver(rc.driver, RngStream(rc.seed).sub(rng_purpose::driver));
  const BandRep ax = decompose(x, rc.bands);
  const double p_x = band_power(ax, peak_frequency(ax).first);

  // Subsample the sweep's target grid; each kept target reuses the noise
  // substream of its original grid index, so bench inputs are a strict
  // subset of what the corresponding sweep would produce.
  const SweepConfig sc = rc.sweep_config();
  RngStream pick_rng = RngStream(rc.seed).sub(rng_purpose::subsample);
  std::vector<BandRep> ay_set;
  ay_set.reserve(rc.bench.n_coh_sub);
  for (std::size_t j = 0; j < rc.bench.n_coh_sub; ++j) {
    const auto idx = static_cast<std::size_t>(pick_rng.below(sc.c_true_grid.size()));
    RngStream noise_rng = RngStream(rc.seed).sub(rng_purpose::noise).sub(idx);
    const Observation obs = make_observation(x, sc.c_true_grid[idx], rc.bands, noise_rng, p_x);
    ay_set.push_back(decompose(obs.y, rc.bands));
  }

  const BenchReport report = run_bench(ax, ay_set, rc.bench);

  CsvWriter w({"method", "n_perm", "repeat", "seconds"});
  for (const BenchSample& s : report.samples)
    w.add_row({bench_method_name(s.method), std::to_string(s.n_perm), std::to_string(s.repeat),
               format_double(s.seconds)});
  w.save(out_path(rc, "bench.csv"));

  CsvWriter ws({"method", "n_perm", "median_s", "std_s", "speedup_vs_glm", "wilcoxon_p",
                "ttest_p"});
  for (const BenchSummaryRow& r : report.summary) {
    const bool is_glm = r.method == BenchMethod::glm;
    ws.add_row({bench_method_name(r.method), is_glm ? "na" : std::to_string(r.n_perm),
                format_double(r.median_s), format_double(r.std_s),
                is_glm ? "na" : format_double(r.speedup_vs_glm),
                is_glm ? "na" : format_double(r.wilcoxon_p),
                is_glm ? "na" : format_double(r.ttest_p)});
  }
  ws.save(out_path(rc, "bench_summary.csv"));

  std::printf("input checksum: %016llx\n",
              static_cast<unsigned long long>(report.input_checksum));
  for (const BenchSummaryRow& r : report.summary)
    if (r.method != BenchMethod::glm && r.n_perm == 2000)
      std::printf("%s @ n_perm=2000: median %.4f s, speedup %.1fx\n",
                  bench_method_name(r.method), r.median_s, r.speedup_vs_glm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric and surrogate significance tests for band coherence"};
  app.fallthrough();
  CliOverrides ov;
  app.add_option("--config", ov.config_path, "run configuration file");
  app.add_option("--out", ov.out_dir, "output directory");
  app.add_option("--threads", ov.threads, "worker thread cap");
  auto* seed_opt = app.add_option("--seed", ov.seed, "top-level RNG seed");
  auto* nperm_opt = app.add_option("--nperm", ov.nperm, "surrogate permutation count");
  auto* alpha_opt = app.add_option("--alpha", ov.alpha, "detection significance level");

  std::string driver_csv, observation_csv, sweep_csv, control_csv;
  CLI::App* sim = app.add_subcommand("simulate", "run the coherence sweep");
  CLI::App* tst = app.add_subcommand("test", "test one driver/observation pair per band");
  tst->add_option("driver_csv", driver_csv, "driver signal CSV")->required();
  tst->add_option("observation_csv", observation_csv, "observation signal CSV")->required();
  CLI::App* pow = app.add_subcommand("power", "binned detection-rate curves from a sweep");
  pow->add_option("sweep_csv", sweep_csv, "sweep records CSV")->required();
  CLI::App* rocc = app.add_subcommand("roc", "ROC curves: sweep vs control records");
  rocc->add_option("sweep_csv", sweep_csv, "sweep records CSV")->required();
  rocc->add_option("control_csv", control_csv, "control-band records CSV");
  CLI::App* agr = app.add_subcommand("agreement", "parametric vs surrogate p-value pairs");
  agr->add_option("sweep_csv", sweep_csv, "sweep records CSV")->required();
  CLI::App* ben = app.add_subcommand("bench", "wall-clock comparison of the three tests");
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  ov.seed_set = seed_opt->count() > 0;
  ov.nperm_set = nperm_opt->count() > 0;
  ov.alpha_set = alpha_opt->count() > 0;

  try {
    if (sim->parsed()) return cmd_simulate(ov);
    if (tst->parsed()) return cmd_test(ov, driver_csv, observation_csv);
    if (pow->parsed()) return cmd_power(ov, sweep_csv);
    if (rocc->parsed()) return cmd_roc(ov, sweep_csv, control_csv);
    if (agr->parsed()) return cmd_agreement(ov, sweep_csv);
    if (ben->parsed()) return cmd_bench(ov);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const DriverLoadError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const BadTarget& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const EmptyInput& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InsufficientData& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidBandRange& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
