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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fresure/dynamics.hpp"
#include "fresure/model.hpp"
#include "fresure/spectra.hpp"

namespace fresure {

struct AnalysisConfig {
  FrequencyWindow window{};
  std::size_t zero_pad_factor = 4;
  double prominence = 0.05;
  SpectrumMode spectrum_mode = SpectrumMode::absorption;
  /// Exponential line broadening in Hz; 0 disables it.
  double apodization_hz = 0.0;

  SpectrumOptions spectrum_options() const;
  PeakOptions peak_options() const;
};

struct SweepConfig {
  std::vector<double> n_values{0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  std::size_t mc_samples = 1000;
  std::optional<double> threshold;
  FrequencyWindow window = FrequencyWindow::everything();
};

enum class AllanAveraging { per_measurement, averaged_fid };

struct AllanConfig {
  std::size_t n_measurements = 128;
  std::size_t mc_per_measurement = 1000;
  HamiltonianModel model = HamiltonianModel::secular;
  AllanAveraging averaging = AllanAveraging::per_measurement;
  /// Empty selects octave sizes 1, 2, 4, ... up to n_measurements / 2.
  std::vector<std::size_t> m_values;
};

struct ExperimentConfig {
  SpinSystemParams system{};
  NoiseModel noise{};
  Acquisition acquisition{};
  MonteCarloSettings mc{};
  AnalysisConfig analysis{};
  SweepConfig sweep{};
  AllanConfig allan{};

  /// Throws ValidationError when a sub-invariant fails.
  void validate() const;
};

/// Parses a JSON document. Sections may be omitted and fall back to defaults,
/// except `mc.seed` which is mandatory. Unknown keys are rejected.
/// Throws ValidationError with the offending key path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Baseline configuration with the given seed.
ExperimentConfig default_config(std::uint64_t seed);

std::string config_to_json(const ExperimentConfig& config);

std::string to_string(HamiltonianModel model);
std::optional<HamiltonianModel> parse_model(std::string_view text);
std::string to_string(SpectrumMode mode);
std::optional<SpectrumMode> parse_spectrum_mode(std::string_view text);

}  // namespace fresure
