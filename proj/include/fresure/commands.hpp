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

#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "fresure/config.hpp"
#include "fresure/metrology.hpp"
#include "fresure/spectra.hpp"
#include "fresure/states.hpp"

namespace fresure {

/// What a command produced. `summary_json` is printed by the CLI.
struct CommandReport {
  std::vector<std::filesystem::path> outputs;
  bool all_converged = true;
  std::string summary_json;
};

struct SimulateOptions {
  std::vector<StateLabel> states{kAllStates.begin(), kAllStates.end()};
  HamiltonianModel model = HamiltonianModel::secular;
  /// Exact Lorentzian average instead of Monte Carlo (secular model only).
  bool analytic = false;
  std::filesystem::path out_dir = ".";
};

/// Per state: fid/<state>_fid.csv and <state>_spectrum.csv. When all four PPSs
/// are simulated also pps_sum_spectrum.csv, holding (p/q) * sum of the PPS
/// spectra. Always spectra.svg.
CommandReport cmd_simulate(const ExperimentConfig& config, const SimulateOptions& options);

struct DecomposeOptions {
  std::filesystem::path thermal_csv;
  std::array<std::filesystem::path, 4> pps_csv;
  FrequencyWindow window{};
  /// Linearly interpolate PPS spectra onto the thermal grid instead of rejecting.
  bool resample = false;
  std::filesystem::path out_dir = ".";
};

/// decompose.json (lambda, residual, per-PPS peak metrics) and decompose.svg.
CommandReport cmd_decompose(const ExperimentConfig& config, const DecomposeOptions& options);

struct FitOptions {
  std::filesystem::path spectrum_csv;
  std::size_t n_peaks = 4;
  PeakConstraint constraint = PeakConstraint::none;
  /// Empty: analytic positions for 4 peaks, detected peaks for 3.
  std::vector<double> init_positions_hz;
  /// 0 selects the configured noise FWHM.
  double init_width_hz = 0.0;
  double bound_hz = 10.0;
  FrequencyWindow window{};
  int max_iterations = 500;
  std::filesystem::path out_dir = ".";
};

/// fit.json and fit.svg. `all_converged` mirrors the fit status.
CommandReport cmd_fit(const ExperimentConfig& config, const FitOptions& options);

struct SweepCommandOptions {
  std::optional<double> threshold;  // overrides config.sweep.threshold
  std::filesystem::path out_dir = ".";
};

/// sweep.csv (n, infidelity, noise_floor), sweep.json and sweep.svg.
CommandReport cmd_sweep(const ExperimentConfig& config, const SweepCommandOptions& options);

enum class AllanSource { series, white_noise, pipeline };

struct AllanOptions {
  AllanSource source = AllanSource::series;
  std::filesystem::path series_csv;
  /// Synthetic series: gaussian white noise of std sigma_hz plus a linear drift.
  std::size_t length = 4096;
  double sigma_hz = 1.0;
  double drift_hz_per_sample = 0.0;
  std::vector<std::size_t> m_values;  // empty: config or octaves
  std::filesystem::path out_dir = ".";
};

/// allan.csv, allan.json and allan.svg; the pipeline also writes allan_series.csv.
CommandReport cmd_allan(const ExperimentConfig& config, const AllanOptions& options);

struct ImportFidOptions {
  std::filesystem::path fid_csv;
  std::size_t max_peaks = 4;
  std::filesystem::path out_dir = ".";
};

/// <stem>_fid.csv (normalized copy), <stem>_spectrum.csv, <stem>_peaks.json, <stem>_spectrum.svg.
CommandReport cmd_import_fid(const ExperimentConfig& config, const ImportFidOptions& options);

/// Gaussian white noise with a linear drift, from the counter-based stream.
std::vector<double> synthetic_series(std::size_t length, double sigma_hz,
                                     double drift_hz_per_sample, std::uint64_t seed);

struct AllanPipelineResult {
  /// Peak position of each PPS in every measurement.
  std::array<std::vector<double>, 4> positions_hz;
  std::array<AllanResult, 4> allan;
};

/// Repeats (Monte Carlo FIDs -> spectrum -> single peak) per PPS for
/// config.allan.n_measurements independent seeds and evaluates Allan deviations.
AllanPipelineResult run_allan_pipeline(const ExperimentConfig& config,
                                       std::vector<std::size_t> m_values = {});

}  // namespace fresure
