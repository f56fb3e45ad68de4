// Copyright 2026 The fresure Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <iostream>

#include "fresure/commands.hpp"
#include "fresure/error.hpp"
#include "fresure/kernels.hpp"

namespace {

using namespace fresure;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnconverged = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> mc;
  std::optional<std::size_t> workers;
  std::string out_dir = ".";
  bool allow_unconverged = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c, bool monte_carlo) {
  cmd->add_option("-c,--config", c.config_path, "Experiment config (JSON)");
  cmd->add_option("-o,--out", c.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Override mc.seed (required without --config)");
  if (monte_carlo) {
    cmd->add_option("--mc", c.mc, "Override the number of Monte Carlo samples")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", c.workers, "Worker threads (0: automatic)");
  }
  cmd->add_flag("--allow-unconverged", c.allow_unconverged,
                "Exit 0 even when a fit did not converge");
  cmd->add_flag("-q,--quiet", c.quiet, "Do not print the JSON summary");
}

ExperimentConfig resolve_config(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    cfg = load_config(c.config_path);
  } else if (c.seed) {
    cfg = default_config(*c.seed);
  } else {
    throw ArgumentError("either --config or --seed is required (no implicit seeding)");
  }
  if (c.seed) cfg.mc.seed = *c.seed;
  if (c.mc) cfg.mc.n_mc = *c.mc;
  if (c.workers) cfg.mc.workers = *c.workers;
  cfg.validate();
  return cfg;
}

FrequencyWindow parse_window(const std::vector<double>& w, FrequencyWindow fallback) {
  if (w.empty()) return fallback;
  if (w.size() != 2 || !(w[0] < w[1])) {
    throw ArgumentError("--window expects LO HI with LO < HI");
  }
  return {w[0], w[1]};
}

int finish(const CommandReport& report, const Common& c) {
  if (!c.quiet) {
    std::cout << report.summary_json << '\n';
  }
  for (const auto& p : report.outputs) {
    std::cerr << "wrote " << p.string() << '\n';
  }
  if (!report.all_converged && !c.allow_unconverged) {
    std::cerr << "error: fit did not converge (pass --allow-unconverged to accept)\n";
    return kExitUnconverged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fresure: three-spin NMR simulation and frequency super-resolution analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "fresure 0.1.0");

  Common common;
  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate FIDs and spectra of the initial states");
  add_common(sim, common, true);
  std::string sim_state = "all";
  std::string sim_model = "secular";
  bool sim_analytic = false;
  sim->add_option("--state", sim_state, "thermal, ppsA..ppsD or all")->capture_default_str();
  sim->add_option("--model", sim_model, "full or secular")->capture_default_str();
  sim->add_flag("--analytic", sim_analytic, "Exact noise average (secular model only)");

  // decompose
  auto* dec = app.add_subcommand("decompose", "Fit lambda between thermal and summed PPS spectra");
  add_common(dec, common, false);
  std::string dec_thermal;
  std::vector<std::string> dec_pps;
  std::vector<double> dec_window;
  bool dec_resample = false;
  dec->add_option("--thermal", dec_thermal, "Thermal spectrum CSV")->required();
  dec->add_option("--pps", dec_pps, "Four PPS spectrum CSVs (A B C D)")->required()->expected(4);
  dec->add_option("--window", dec_window, "Frequency window LO HI (Hz)")->expected(2);
  dec->add_flag("--resample", dec_resample, "Interpolate PPS spectra onto the thermal grid");

  // fit
  auto* fit = app.add_subcommand("fit", "Multi-Lorentzian least-squares fit of a spectrum");
  add_common(fit, common, false);
  FitOptions fit_opts;
  std::string fit_csv;
  std::string fit_constraint = "none";
  std::vector<double> fit_window;
  fit->add_option("spectrum", fit_csv, "Spectrum CSV")->required();
  fit->add_option("--peaks", fit_opts.n_peaks, "Number of peaks (3 or 4)")->capture_default_str();
  fit->add_option("--constraint", fit_constraint, "none, equal-width or equal-width-height")
      ->capture_default_str();
  fit->add_option("--init", fit_opts.init_positions_hz, "Initial positions (Hz)");
  fit->add_option("--init-width", fit_opts.init_width_hz, "Initial FWHM (Hz), default gamma");
  fit->add_option("--bound", fit_opts.bound_hz, "Positions stay within init +/- bound (Hz)")
      ->capture_default_str();
  fit->add_option("--window", fit_window, "Frequency window LO HI (Hz)")->expected(2);
  fit->add_option("--max-iterations", fit_opts.max_iterations)->capture_default_str();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Secular-approximation infidelity versus coupling");
  add_common(sweep, common, true);
  std::optional<double> sweep_threshold;
  sweep->add_option("--threshold", sweep_threshold, "Infidelity threshold");

  // allan
  auto* allan = app.add_subcommand("allan", "Allan deviation of peak-position series");
  add_common(allan, common, false);
  AllanOptions allan_opts;
  std::string allan_series;
  bool allan_white = false;
  bool allan_pipeline = false;
  allan->add_option("--series", allan_series, "Single-column CSV of measurements");
  allan->add_flag("--white-noise", allan_white, "Generate a seeded white-noise series");
  allan->add_flag("--pipeline", allan_pipeline, "Repeat simulate -> peak per PPS");
  allan->add_option("--length", allan_opts.length, "Synthetic series length")
      ->capture_default_str();
  allan->add_option("--sigma", allan_opts.sigma_hz, "Synthetic noise std (Hz)")
      ->capture_default_str();
  allan->add_option("--drift", allan_opts.drift_hz_per_sample, "Synthetic drift (Hz/sample)")
      ->capture_default_str();
  allan->add_option("--m", allan_opts.m_values, "Averaging sizes M");

  // import-fid
  auto* imp = app.add_subcommand("import-fid", "Import an FID CSV and compute its spectrum");
  add_common(imp, common, false);
  ImportFidOptions imp_opts;
  std::string imp_csv;
  imp->add_option("fid", imp_csv, "FID CSV (t_s,re,im)")->required();
  imp->add_option("--max-peaks", imp_opts.max_peaks)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    kernels::active();  // rejects an invalid FRESURE_SIMD up front
    const ExperimentConfig cfg = resolve_config(common);
    if (sim->parsed()) {
      SimulateOptions o;
      o.out_dir = common.out_dir;
      o.analytic = sim_analytic;
      const auto model = parse_model(sim_model);
      if (!model) throw ArgumentError("--model must be full or secular");
      o.model = *model;
      if (sim_state != "all") {
        const auto st = parse_state(sim_state);
        if (!st) throw ArgumentError("--state must be thermal, ppsA..ppsD or all");
        o.states = {*st};
      }
      exit_code = finish(cmd_simulate(cfg, o), common);
    } else if (dec->parsed()) {
      DecomposeOptions o;
      o.out_dir = common.out_dir;
      o.thermal_csv = dec_thermal;
      for (std::size_t i = 0; i < 4; ++i) o.pps_csv[i] = dec_pps[i];
      o.window = parse_window(dec_window, cfg.analysis.window);
      o.resample = dec_resample;
      exit_code = finish(cmd_decompose(cfg, o), common);
    } else if (fit->parsed()) {
      fit_opts.out_dir = common.out_dir;
      fit_opts.spectrum_csv = fit_csv;
      fit_opts.window = parse_window(fit_window, cfg.analysis.window);
      if (fit_constraint == "none") {
        fit_opts.constraint = PeakConstraint::none;
      } else if (fit_constraint == "equal-width") {
        fit_opts.constraint = PeakConstraint::equal_width;
      } else if (fit_constraint == "equal-width-height") {
        fit_opts.constraint = PeakConstraint::equal_width_and_height;
      } else {
        throw ArgumentError("--constraint must be none, equal-width or equal-width-height");
      }
      exit_code = finish(cmd_fit(cfg, fit_opts), common);
    } else if (sweep->parsed()) {
      SweepCommandOptions o;
      o.out_dir = common.out_dir;
      o.threshold = sweep_threshold;
      ExperimentConfig c = cfg;
      if (common.mc) c.sweep.mc_samples = *common.mc;
      exit_code = finish(cmd_sweep(c, o), common);
    } else if (allan->parsed()) {
      const int sources = int(!allan_series.empty()) + int(allan_white) + int(allan_pipeline);
      if (sources != 1) {
        throw ArgumentError("allan needs exactly one of --series, --white-noise, --pipeline");
      }
      allan_opts.out_dir = common.out_dir;
      allan_opts.series_csv = allan_series;
      allan_opts.source = allan_pipeline ? AllanSource::pipeline
                          : allan_white  ? AllanSource::white_noise
                                         : AllanSource::series;
      exit_code = finish(cmd_allan(cfg, allan_opts), common);
    } else if (imp->parsed()) {
      imp_opts.out_dir = common.out_dir;
      imp_opts.fid_csv = imp_csv;
      exit_code = finish(cmd_import_fid(cfg, imp_opts), common);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return exit_code;
}
