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

#include "fresure/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <numbers>

#include "fresure/csv_io.hpp"
#include "fresure/error.hpp"
#include "fresure/svg.hpp"

namespace fresure {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  }
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << doc.dump(2) << '\n') || !out.flush()) {
    throw IoError("cannot write " + path.string());
  }
}

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json peak_json(const PeakEstimate& p) {
  return {{"position_hz", p.position_hz},
          {"fwhm_hz", nullable(p.fwhm_hz)},
          {"fwhm_lorentz_hz", nullable(p.fwhm_lorentz_hz)},
          {"height", p.height},
          {"position_uncertainty_hz", nullable(p.position_uncertainty_hz)}};
}

json peaks_json(const std::vector<PeakEstimate>& peaks) {
  json out = json::array();
  for (const auto& p : peaks) {
    out.push_back(peak_json(p));
  }
  return out;
}

json window_json(const FrequencyWindow& w) {
  return json::array({nullable(w.lo_hz), nullable(w.hi_hz)});
}

PlotSeries spectrum_series(const std::string& label, const Spectrum& s) {
  return {label, s.freq_hz, s.amplitude};
}

std::optional<std::pair<double, double>> plot_range(const FrequencyWindow& w) {
  if (std::isfinite(w.lo_hz) && std::isfinite(w.hi_hz)) {
    return std::make_pair(w.lo_hz, w.hi_hz);
  }
  return std::nullopt;
}

double state_amplitude(StateLabel label, const SpinSystemParams& p) {
  return label == StateLabel::thermal ? p.thermal_p : p.pps_q;
}

// Value of the amplitude array at f by linear interpolation (clamped).
double interpolate(const std::vector<double>& x, const std::vector<double>& y, double f) {
  if (f <= x.front()) return y.front();
  if (f >= x.back()) return y.back();
  const auto it = std::upper_bound(x.begin(), x.end(), f);
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  const double w = (f - x[k - 1]) / (x[k] - x[k - 1]);
  return (1.0 - w) * y[k - 1] + w * y[k];
}

Spectrum resample_onto(const Spectrum& src, const Spectrum& grid) {
  Spectrum out = grid;
  std::vector<double> re(src.size()), im(src.size());
  for (std::size_t k = 0; k < src.size(); ++k) {
    re[k] = src.complex_values[k].real();
    im[k] = src.complex_values[k].imag();
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double f = grid.freq_hz[k];
    const bool inside = f >= src.freq_hz.front() && f <= src.freq_hz.back();
    out.amplitude[k] = inside ? interpolate(src.freq_hz, src.amplitude, f) : 0.0;
    out.complex_values[k] =
        inside ? Complex(interpolate(src.freq_hz, re, f), interpolate(src.freq_hz, im, f)) : 0.0;
  }
  out.mode = src.mode;
  return out;
}

bool same_grid(const Spectrum& a, const Spectrum& b) {
  try {
    require_same_grid(a, b);
    return true;
  } catch (const ArgumentError&) {
    return false;
  }
}

std::string pps_name(std::size_t i) { return to_string(to_state(kPpsLabels[i])); }

// Deviation of group means built by `group_mean(g, m)` for g < len/m.
template <class GroupMean>
AllanResult allan_from_groups(std::size_t len, std::span<const std::size_t> m_values,
                              GroupMean group_mean) {
  AllanResult r;
  r.series_length = len;
  r.m_values.assign(m_values.begin(), m_values.end());
  for (std::size_t m : m_values) {
    const std::size_t groups = len / m;
    std::vector<double> means(groups);
    for (std::size_t g = 0; g < groups; ++g) {
      means[g] = group_mean(g, m);
    }
    double acc = 0.0;
    for (std::size_t g = 0; g + 1 < groups; ++g) {
      acc += (means[g + 1] - means[g]) * (means[g + 1] - means[g]);
    }
    r.sigma_hz.push_back(std::sqrt(acc / (2.0 * static_cast<double>(groups - 1))));
  }
  return r;
}

std::vector<std::size_t> resolve_m_values(std::vector<std::size_t> requested,
                                          const std::vector<std::size_t>& configured,
                                          std::size_t length) {
  if (requested.empty()) {
    requested = configured;
  }
  if (requested.empty()) {
    requested = octave_m_values(length);
  }
  return requested;
}

}  // namespace

CommandReport cmd_simulate(const ExperimentConfig& config, const SimulateOptions& options) {
  config.validate();
  if (options.states.empty()) {
    throw ArgumentError("simulate: no states requested");
  }
  std::vector<FidRecord> fids;
  if (options.analytic) {
    for (StateLabel s : options.states) {
      fids.push_back(fid_analytic_averaged(s, config.system, config.noise.gamma_fwhm_hz,
                                           state_amplitude(s, config.system), config.acquisition,
                                           options.model));
    }
  } else {
    fids = fid_noise_averaged(options.states, config.system, config.noise, config.mc,
                              config.acquisition, options.model);
  }
  const SpectrumOptions spec_opts = config.analysis.spectrum_options();
  std::vector<Spectrum> spectra;
  for (const auto& f : fids) {
    spectra.push_back(fft_spectrum(f, spec_opts));
  }

  json summary;
  summary["command"] = "simulate";
  summary["model"] = to_string(options.model);
  summary["analytic"] = options.analytic;
  summary["n_mc"] = options.analytic ? 0 : config.mc.n_mc;
  summary["seed"] = config.mc.seed;
  summary["spectrum_mode"] = to_string(spec_opts.mode);
  summary["weak_coupling_ratio"] = config.system.weak_coupling_ratio();
  summary["weak_coupling_warning"] = config.system.weak_coupling_warning();
  json states = json::object();
  for (std::size_t i = 0; i < options.states.size(); ++i) {
    const bool thermal = options.states[i] == StateLabel::thermal;
    states[to_string(options.states[i])] = {
        {"peaks", peaks_json(find_peaks(spectra[i], config.analysis.window, thermal ? 4 : 1,
                                        config.analysis.peak_options()))}};
  }
  summary["states"] = states;

  // Scaled PPS sum, when all four parts are present.
  std::optional<Spectrum> sum;
  std::array<std::optional<std::size_t>, 4> pps_index;
  std::optional<std::size_t> thermal_index;
  for (std::size_t i = 0; i < options.states.size(); ++i) {
    if (const auto pps = to_pps(options.states[i])) {
      pps_index[static_cast<std::size_t>(*pps)] = i;
    } else {
      thermal_index = i;
    }
  }
  if (std::all_of(pps_index.begin(), pps_index.end(), [](const auto& v) { return v.has_value(); })) {
    const double scale = config.system.thermal_p / config.system.pps_q;
    sum = spectra[*pps_index[0]];
    for (std::size_t k = 0; k < sum->size(); ++k) {
      Complex c = 0.0;
      double a = 0.0;
      for (const auto& idx : pps_index) {
        c += spectra[*idx].complex_values[k];
        a += spectra[*idx].amplitude[k];
      }
      sum->complex_values[k] = scale * c;
      sum->amplitude[k] = scale * a;
    }
    if (thermal_index) {
      const Spectrum& t = spectra[*thermal_index];
      double max_dev = 0.0, peak = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        max_dev = std::max(max_dev, std::abs(t.amplitude[k] - sum->amplitude[k]));
        peak = std::max(peak, std::abs(t.amplitude[k]));
      }
      summary["sum_vs_thermal"] = {
          {"max_abs_deviation", max_dev},
          {"relative_to_peak", peak > 0.0 ? max_dev / peak : 0.0},
          {"infidelity",
           spectral_infidelity(t, *sum, config.analysis.window).delta_s_over_s}};
    }
  }

  Plot plot;
  plot.title = "Spectra (" + to_string(options.model) + " model)";
  plot.x_label = "frequency (Hz)";
  plot.y_label = to_string(spec_opts.mode) + " amplitude";
  plot.x_range = plot_range(config.analysis.window);
  for (std::size_t i = 0; i < options.states.size(); ++i) {
    plot.series.push_back(spectrum_series(to_string(options.states[i]), spectra[i]));
  }
  if (sum) {
    auto s = spectrum_series("(p/q) sum of PPS", *sum);
    s.dashed = true;
    plot.series.push_back(std::move(s));
  }

  CommandReport report;
  ensure_dir(options.out_dir / "fid");
  for (std::size_t i = 0; i < options.states.size(); ++i) {
    const std::string name = to_string(options.states[i]);
    const fs::path fid_path = options.out_dir / "fid" / (name + "_fid.csv");
    const fs::path spec_path = options.out_dir / (name + "_spectrum.csv");
    write_fid_csv(fid_path, fids[i]);
    write_spectrum_csv(spec_path, spectra[i]);
    report.outputs.push_back(fid_path);
    report.outputs.push_back(spec_path);
  }
  if (sum) {
    const fs::path p = options.out_dir / "pps_sum_spectrum.csv";
    write_spectrum_csv(p, *sum);
    report.outputs.push_back(p);
  }
  const fs::path svg = options.out_dir / "spectra.svg";
  write_svg(svg, plot);
  report.outputs.push_back(svg);
  report.summary_json = summary.dump(2);
  return report;
}

CommandReport cmd_decompose(const ExperimentConfig& config, const DecomposeOptions& options) {
  const Spectrum thermal = read_spectrum_csv(options.thermal_csv);
  std::vector<Spectrum> parts;
  bool resampled = false;
  for (const auto& path : options.pps_csv) {
    Spectrum s = read_spectrum_csv(path);
    if (!same_grid(thermal, s)) {
      if (!options.resample) {
        throw ArgumentError("decompose: " + path.string() +
                            " is on a different frequency grid (use --resample)");
      }
      s = resample_onto(s, thermal);
      resampled = true;
    }
    parts.push_back(std::move(s));
  }
  const DecompositionResult dec = fit_decomposition_scale(thermal, parts, options.window);

  json summary;
  summary["command"] = "decompose";
  summary["lambda"] = dec.lambda;
  summary["residual"] = dec.residual;
  summary["window_hz"] = window_json(options.window);
  summary["resampled"] = resampled;
  json table = json::array();
  const PeakOptions popts = config.analysis.peak_options();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto peaks = find_peaks(parts[i], options.window, 1, popts);
    json row = {{"state", pps_name(i)}};
    if (peaks.empty()) {
      row["peak"] = nullptr;
    } else {
      row["peak"] = peak_json(peaks.front());
    }
    table.push_back(row);
  }
  summary["table"] = table;
  summary["thermal_peaks"] = peaks_json(find_peaks(thermal, options.window, 4, popts));

  const std::vector<double> sum = summed_amplitude(parts);
  Plot plot;
  plot.title = "Decomposition, lambda = " + format_double(dec.lambda);
  plot.x_label = "frequency (Hz)";
  plot.y_label = "amplitude";
  plot.x_range = plot_range(options.window);
  plot.series.push_back(spectrum_series("thermal", thermal));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    PlotSeries s = spectrum_series(pps_name(i) + " x lambda", parts[i]);
    for (double& v : s.y) v *= dec.lambda;
    plot.series.push_back(std::move(s));
  }
  PlotSeries total{"lambda x sum", thermal.freq_hz, sum, true};
  for (double& v : total.y) v *= dec.lambda;
  plot.series.push_back(std::move(total));

  CommandReport report;
  ensure_dir(options.out_dir);
  const fs::path json_path = options.out_dir / "decompose.json";
  const fs::path svg_path = options.out_dir / "decompose.svg";
  write_json(json_path, summary);
  write_svg(svg_path, plot);
  report.outputs = {json_path, svg_path};
  report.summary_json = summary.dump(2);
  return report;
}

CommandReport cmd_fit(const ExperimentConfig& config, const FitOptions& options) {
  if (options.n_peaks != 3 && options.n_peaks != 4) {
    throw ArgumentError("fit: --peaks must be 3 or 4");
  }
  if (!(options.bound_hz >= 0.0)) {
    throw ArgumentError("fit: bound must be >= 0");
  }
  const Spectrum spec = read_spectrum_csv(options.spectrum_csv);
  std::vector<double> init = options.init_positions_hz;
  if (init.empty()) {
    if (options.n_peaks == 4) {
      const auto peaks = derived_frequencies(config.system).peak_hz;
      init.assign(peaks.begin(), peaks.end());
    } else {
      for (const auto& p : find_peaks(spec, options.window, 3, config.analysis.peak_options())) {
        init.push_back(p.position_hz);
      }
      if (init.size() != 3) {
        throw ArgumentError("fit: found " + std::to_string(init.size()) +
                            " peaks for a 3-peak fit; pass --init");
      }
    }
  }
  if (init.size() != options.n_peaks) {
    throw ArgumentError("fit: expected " + std::to_string(options.n_peaks) +
                        " initial positions, got " + std::to_string(init.size()));
  }
  const double width = options.init_width_hz > 0.0 ? options.init_width_hz
                                                    : config.noise.gamma_fwhm_hz;
  MultiLorentzianRequest req;
  req.constraint = options.constraint;
  req.window = options.window;
  req.max_iterations = options.max_iterations;
  for (double f : init) {
    req.init.push_back({f, std::max(interpolate(spec.freq_hz, spec.amplitude, f), 0.0), width});
    req.bounds.push_back({f - options.bound_hz, f + options.bound_hz});
  }
  const MultiLorentzianFit fit = fit_multi_lorentzian(spec, req);

  json summary;
  summary["command"] = "fit";
  summary["n_peaks"] = options.n_peaks;
  summary["constraint"] = {
      {"equal_width", options.constraint != PeakConstraint::none},
      {"equal_height", options.constraint == PeakConstraint::equal_width_and_height}};
  summary["converged"] = fit.converged;
  summary["iterations"] = fit.iterations;
  summary["cost"] = fit.cost;
  summary["local_maxima"] = fit.local_maxima;
  summary["single_fat_peak"] = fit.single_fat_peak();
  summary["window_hz"] = window_json(options.window);
  json peaks = json::array();
  for (std::size_t i = 0; i < fit.peaks.size(); ++i) {
    json p = peak_json(fit.peaks[i]);
    p.erase("fwhm_lorentz_hz");
    p["bounds_hz"] = {req.bounds[i].lo_hz, req.bounds[i].hi_hz};
    peaks.push_back(p);
  }
  summary["peaks"] = peaks;

  Plot plot;
  plot.title = fit.single_fat_peak() ? "Lorentzian fit (single fat peak)" : "Lorentzian fit";
  plot.x_label = "frequency (Hz)";
  plot.y_label = "amplitude";
  plot.x_range = std::make_pair(fit.freq_hz.front(), fit.freq_hz.back());
  plot.series.push_back(spectrum_series("data", spec));
  plot.series.push_back({"fit", fit.freq_hz, fit.fitted_curve, true});
  for (std::size_t i = 0; i < fit.parameters.size(); ++i) {
    PlotSeries s{"peak " + std::to_string(i + 1), fit.freq_hz, {}};
    for (double f : fit.freq_hz) s.y.push_back(lorentzian(fit.parameters[i], f));
    plot.series.push_back(std::move(s));
  }

  CommandReport report;
  ensure_dir(options.out_dir);
  const fs::path json_path = options.out_dir / "fit.json";
  const fs::path svg_path = options.out_dir / "fit.svg";
  write_json(json_path, summary);
  write_svg(svg_path, plot);
  report.outputs = {json_path, svg_path};
  report.all_converged = fit.converged;
  report.summary_json = summary.dump(2);
  return report;
}

CommandReport cmd_sweep(const ExperimentConfig& config, const SweepCommandOptions& options) {
  config.validate();
  SweepOptions so;
  so.acquisition = config.acquisition;
  so.mc = {config.sweep.mc_samples, config.mc.seed, config.mc.workers, config.mc.sampling};
  so.spectrum = config.analysis.spectrum_options();
  so.window = config.sweep.window;
  const auto points = coupling_sweep(config.system, config.noise, config.sweep.n_values, so);

  std::optional<double> threshold = options.threshold ? options.threshold : config.sweep.threshold;
  std::string threshold_source = options.threshold ? "cli" : "config";
  if (!threshold) {
    for (const auto& p : points) {
      if (p.infidelity.n == 2.0) {
        threshold = p.infidelity.delta_s_over_s;
        threshold_source = "infidelity_at_n2";
      }
    }
  }
  json summary;
  summary["command"] = "sweep";
  summary["seed"] = config.mc.seed;
  summary["mc_samples"] = config.sweep.mc_samples;
  json jp = json::array();
  std::vector<double> col_n, col_inf, col_floor;
  for (const auto& p : points) {
    jp.push_back({{"n", p.infidelity.n},
                  {"infidelity", p.infidelity.delta_s_over_s},
                  {"noise_floor", p.noise_floor}});
    col_n.push_back(p.infidelity.n);
    col_inf.push_back(p.infidelity.delta_s_over_s);
    col_floor.push_back(p.noise_floor);
  }
  summary["points"] = jp;
  summary["threshold"] = threshold ? json(*threshold) : json(nullptr);
  summary["threshold_source"] = threshold ? json(threshold_source) : json(nullptr);
  std::optional<double> valid;
  if (threshold) {
    valid = valid_coupling_range(points, *threshold);
  }
  summary["valid_n_max"] = valid ? json(*valid) : json(nullptr);

  Plot plot;
  plot.title = "Secular approximation infidelity";
  plot.x_label = "coupling magnification n";
  plot.y_label = "spectral infidelity";
  plot.series.push_back({"infidelity", col_n, col_inf, false, true});
  plot.series.push_back({"noise floor", col_n, col_floor, true, true});
  if (threshold) {
    plot.hlines.push_back({"threshold", *threshold});
  }

  CommandReport report;
  ensure_dir(options.out_dir);
  const fs::path csv = options.out_dir / "sweep.csv";
  const fs::path json_path = options.out_dir / "sweep.json";
  const fs::path svg = options.out_dir / "sweep.svg";
  const std::vector<std::string> header{"n", "infidelity", "noise_floor"};
  const std::vector<std::vector<double>> cols{col_n, col_inf, col_floor};
  write_table_csv(csv, header, cols);
  write_json(json_path, summary);
  write_svg(svg, plot);
  report.outputs = {csv, json_path, svg};
  report.summary_json = summary.dump(2);
  return report;
}

std::vector<double> synthetic_series(std::size_t length, double sigma_hz,
                                     double drift_hz_per_sample, std::uint64_t seed) {
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) {
    // Box-Muller on two deviates of the counter-based stream.
    const double u1 = uniform_open01({seed, 2 * i});
    const double u2 = uniform_open01({seed, 2 * i + 1});
    const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    out[i] = sigma_hz * g + drift_hz_per_sample * static_cast<double>(i);
  }
  return out;
}

AllanPipelineResult run_allan_pipeline(const ExperimentConfig& config,
                                       std::vector<std::size_t> m_values) {
  config.validate();
  const AllanConfig& ac = config.allan;
  m_values = resolve_m_values(std::move(m_values), ac.m_values, ac.n_measurements);
  const std::vector<StateLabel> states{StateLabel::pps_a, StateLabel::pps_b, StateLabel::pps_c,
                                       StateLabel::pps_d};
  const SpectrumOptions spec_opts = config.analysis.spectrum_options();
  const PeakOptions popts = config.analysis.peak_options();
  const FrequencyWindow window = config.analysis.window;

  AllanPipelineResult result;
  // Windowed complex spectra, kept only for FID averaging.
  std::array<std::vector<std::vector<Complex>>, 4> kept;
  Spectrum crop_template;
  for (std::size_t j = 0; j < ac.n_measurements; ++j) {
    const MonteCarloSettings mc{ac.mc_per_measurement, derive_seed(config.mc.seed, j),
                                config.mc.workers, config.mc.sampling};
    const auto fids =
        fid_noise_averaged(states, config.system, config.noise, mc, config.acquisition, ac.model);
    for (std::size_t s = 0; s < 4; ++s) {
      const Spectrum spec = fft_spectrum(fids[s], spec_opts);
      const auto peaks = find_peaks(spec, window, 1, popts);
      if (peaks.empty()) {
        throw ValidationError("allan pipeline: no peak for " + pps_name(s) + " in measurement " +
                              std::to_string(j));
      }
      result.positions_hz[s].push_back(peaks.front().position_hz);
      if (ac.averaging == AllanAveraging::averaged_fid) {
        const auto range = window_indices(spec, window);
        if (!range) {
          throw ValidationError("allan pipeline: analysis window holds no frequency bin");
        }
        const auto [lo, hi] = *range;
        if (crop_template.size() == 0) {
          crop_template = spec;
          crop_template.freq_hz.assign(spec.freq_hz.begin() + lo, spec.freq_hz.begin() + hi + 1);
          crop_template.complex_values.assign(hi - lo + 1, 0.0);
          crop_template.amplitude.assign(hi - lo + 1, 0.0);
        }
        kept[s].emplace_back(spec.complex_values.begin() + lo,
                             spec.complex_values.begin() + hi + 1);
      }
    }
  }

  for (std::size_t s = 0; s < 4; ++s) {
    if (ac.averaging == AllanAveraging::per_measurement) {
      result.allan[s] = allan_deviation(result.positions_hz[s], m_values);
      continue;
    }
    if (2 * m_values.back() > ac.n_measurements) {
      throw ArgumentError("allan pipeline: M too large for the number of measurements");
    }
    result.allan[s] = allan_from_groups(ac.n_measurements, m_values, [&](std::size_t g,
                                                                        std::size_t m) {
      Spectrum avg = crop_template;
      for (std::size_t i = 0; i < m; ++i) {
        const auto& c = kept[s][g * m + i];
        for (std::size_t k = 0; k < c.size(); ++k) avg.complex_values[k] += c[k];
      }
      for (auto& c : avg.complex_values) c /= static_cast<double>(m);
      set_mode(avg, spec_opts.mode);
      const auto peaks = find_peaks(avg, window, 1, popts);
      if (peaks.empty()) {
        throw ValidationError("allan pipeline: no peak in averaged spectrum of " + pps_name(s));
      }
      return peaks.front().position_hz;
    });
  }
  return result;
}

CommandReport cmd_allan(const ExperimentConfig& config, const AllanOptions& options) {
  json summary;
  summary["command"] = "allan";
  std::vector<std::string> labels;
  std::vector<AllanResult> results;
  std::optional<AllanPipelineResult> pipeline;
  switch (options.source) {
    case AllanSource::series:
    case AllanSource::white_noise: {
      std::vector<double> series;
      if (options.source == AllanSource::series) {
        series = read_series_csv(options.series_csv);
        summary["source"] = options.series_csv.string();
      } else {
        if (!(options.sigma_hz >= 0.0)) {
          throw ArgumentError("allan: sigma must be >= 0");
        }
        series = synthetic_series(options.length, options.sigma_hz, options.drift_hz_per_sample,
                                  config.mc.seed);
        summary["source"] = "white_noise";
        summary["sigma_hz"] = options.sigma_hz;
        summary["drift_hz_per_sample"] = options.drift_hz_per_sample;
        summary["seed"] = config.mc.seed;
      }
      const auto m = resolve_m_values(options.m_values, {}, series.size());
      if (m.empty()) {
        throw ArgumentError("allan: series of length " + std::to_string(series.size()) +
                            " is too short");
      }
      labels.push_back("sigma_hz");
      results.push_back(allan_deviation(series, m));
      break;
    }
    case AllanSource::pipeline: {
      pipeline = run_allan_pipeline(config, options.m_values);
      summary["source"] = "pipeline";
      summary["model"] = to_string(config.allan.model);
      summary["averaging"] = config.allan.averaging == AllanAveraging::per_measurement
                                 ? "per_measurement"
                                 : "averaged_fid";
      summary["n_measurements"] = config.allan.n_measurements;
      summary["mc_per_measurement"] = config.allan.mc_per_measurement;
      summary["seed"] = config.mc.seed;
      for (std::size_t s = 0; s < 4; ++s) {
        labels.push_back("sigma_" + pps_name(s) + "_hz");
        results.push_back(pipeline->allan[s]);
      }
      break;
    }
  }

  json curves = json::array();
  Plot plot;
  plot.title = "Allan deviation";
  plot.x_label = "averaged measurements M";
  plot.y_label = "sigma (Hz)";
  plot.log_x = true;
  plot.log_y = std::all_of(results.begin(), results.end(), [](const AllanResult& r) {
    return std::all_of(r.sigma_hz.begin(), r.sigma_hz.end(), [](double v) { return v > 0.0; });
  });
  std::vector<std::vector<double>> cols;
  std::vector<std::string> header{"m"};
  cols.emplace_back(results.front().m_values.begin(), results.front().m_values.end());
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const ResolutionLimit lim = resolution_limit(r);
    json c = {{"label", labels[i]},
              {"series_length", r.series_length},
              {"sigma_min_hz", lim.sigma_min_hz},
              {"m_at_min", lim.m_at_min}};
    try {
      c["log_log_slope"] = log_log_slope(r);
    } catch (const ArgumentError&) {
      c["log_log_slope"] = nullptr;
    }
    curves.push_back(c);
    header.push_back(labels[i]);
    cols.push_back(r.sigma_hz);
    plot.series.push_back({labels[i], cols.front(), r.sigma_hz, false, true});
  }
  summary["curves"] = curves;

  CommandReport report;
  ensure_dir(options.out_dir);
  const fs::path csv = options.out_dir / "allan.csv";
  const fs::path json_path = options.out_dir / "allan.json";
  const fs::path svg = options.out_dir / "allan.svg";
  write_table_csv(csv, header, cols);
  report.outputs.push_back(csv);
  if (pipeline) {
    const fs::path series_csv = options.out_dir / "allan_series.csv";
    std::vector<std::string> h{"measurement"};
    std::vector<std::vector<double>> c(1);
    for (std::size_t j = 0; j < config.allan.n_measurements; ++j) {
      c[0].push_back(static_cast<double>(j));
    }
    for (std::size_t s = 0; s < 4; ++s) {
      h.push_back(pps_name(s) + "_position_hz");
      c.push_back(pipeline->positions_hz[s]);
    }
    write_table_csv(series_csv, h, c);
    report.outputs.push_back(series_csv);
  }
  write_json(json_path, summary);
  write_svg(svg, plot);
  report.outputs.push_back(json_path);
  report.outputs.push_back(svg);
  report.summary_json = summary.dump(2);
  return report;
}

CommandReport cmd_import_fid(const ExperimentConfig& config, const ImportFidOptions& options) {
  const FidRecord fid = read_fid_csv(options.fid_csv);
  const Spectrum spec = fft_spectrum(fid, config.analysis.spectrum_options());
  const auto peaks =
      find_peaks(spec, config.analysis.window, options.max_peaks, config.analysis.peak_options());

  json summary;
  summary["command"] = "import-fid";
  summary["source"] = options.fid_csv.string();
  summary["n_samples"] = fid.n_samples();
  summary["dt_s"] = fid.dt_s;
  summary["peaks"] = peaks_json(peaks);

  Plot plot;
  plot.title = "Spectrum of " + options.fid_csv.filename().string();
  plot.x_label = "frequency (Hz)";
  plot.y_label = to_string(spec.mode) + " amplitude";
  plot.x_range = plot_range(config.analysis.window);
  plot.series.push_back(spectrum_series(options.fid_csv.stem().string(), spec));

  CommandReport report;
  ensure_dir(options.out_dir);
  const std::string stem = options.fid_csv.stem().string();
  const fs::path fid_out = options.out_dir / (stem + "_fid.csv");
  const fs::path spec_out = options.out_dir / (stem + "_spectrum.csv");
  const fs::path json_path = options.out_dir / (stem + "_peaks.json");
  const fs::path svg = options.out_dir / (stem + "_spectrum.svg");
  if (fs::exists(fid_out) && fs::equivalent(fid_out, options.fid_csv)) {
    throw ArgumentError("import-fid: output " + fid_out.string() + " would overwrite the input");
  }
  write_fid_csv(fid_out, fid);
  write_spectrum_csv(spec_out, spec);
  write_json(json_path, summary);
  write_svg(svg, plot);
  report.outputs = {fid_out, spec_out, json_path, svg};
  report.summary_json = summary.dump(2);
  return report;
}

}  // namespace fresure
