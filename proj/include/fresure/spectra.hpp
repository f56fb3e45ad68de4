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
#include <optional>
#include <span>
#include <vector>

#include "fresure/dynamics.hpp"
#include "fresure/model.hpp"

namespace fresure {

/// Which real line shape `Spectrum::amplitude` carries.
///
/// absorption: Re X. For the zero-phase FIDs produced here this is a
///   Lorentzian of FWHM gamma, and it is linear in the FID.
/// magnitude:  |X|. A damped exponential gives a square-root Lorentzian of
///   FWHM sqrt(3) * gamma.
enum class SpectrumMode { absorption, magnitude };

enum class WindowKind { none, exponential };

/// Multiplies the FID by exp(-pi * rate_hz * t) before the transform
/// (adds rate_hz to every Lorentzian FWHM).
struct ApodizationWindow {
  WindowKind kind = WindowKind::none;
  double rate_hz = 0.0;
};

struct SpectrumOptions {
  std::size_t zero_pad_factor = 4;
  SpectrumMode mode = SpectrumMode::absorption;
  ApodizationWindow window{};
};

/// X(f) = dt * DFT of the (zero-padded) FID on the grid
/// f_k = (k - N/2) / (N dt), k = 0..N-1, so sum |x|^2 dt = sum |X|^2 df.
struct Spectrum {
  std::vector<double> freq_hz;
  std::vector<Complex> complex_values;
  std::vector<double> amplitude;
  double bin_hz = 0.0;
  SpectrumMode mode = SpectrumMode::absorption;
  ApodizationWindow window{};

  std::size_t size() const { return freq_hz.size(); }
};

struct FrequencyWindow {
  double lo_hz = 850.0;
  double hi_hz = 1200.0;

  static FrequencyWindow everything();
  bool contains(double f) const { return f >= lo_hz && f <= hi_hz; }
};

/// Throws ArgumentError when zero_pad_factor < 1 or the FID has < 2 samples.
Spectrum fft_spectrum(const FidRecord& fid, const SpectrumOptions& options = {});

/// Recomputes `amplitude` from `complex_values` for the given mode.
void set_mode(Spectrum& spec, SpectrumMode mode);

/// Inclusive index range [first, last] of grid points inside the window;
/// nullopt when the window holds no grid point.
std::optional<std::pair<std::size_t, std::size_t>> window_indices(const Spectrum& spec,
                                                                  const FrequencyWindow& window);

struct PeakEstimate {
  double position_hz = 0.0;
  double fwhm_hz = 0.0;             // half-height crossings, linear interpolation
  double fwhm_lorentz_hz = 0.0;     // Lorentzian fit to points >= 70% of height
  double height = 0.0;
  double position_uncertainty_hz = 0.0;
};

struct PeakOptions {
  /// Minimum height and topographic prominence, as a fraction of the window maximum.
  double prominence_fraction = 0.05;
  /// Points at or above this fraction of the peak height enter the Lorentzian width fit.
  double lorentz_fit_fraction = 0.7;
};

/// Local maxima in the window ordered by position (at most `max_peaks`, the
/// tallest kept). Empty when nothing qualifies.
std::vector<PeakEstimate> find_peaks(const Spectrum& spec, const FrequencyWindow& window,
                                     std::size_t max_peaks, const PeakOptions& options = {});

struct DecompositionResult {
  double lambda = 0.0;
  double residual = 0.0;  // integral of (s_T - lambda s_S)^2 over the window, Hz units
  FrequencyWindow window{};
};

/// Throws ArgumentError on mismatched grids; DegenerateFitError when the summed
/// parts carry no energy in the window.
void require_same_grid(const Spectrum& a, const Spectrum& b);

/// Closed-form least-squares scale between s_T and s_S = sum of parts.
DecompositionResult fit_decomposition_scale(const Spectrum& thermal, std::span<const Spectrum> parts,
                                            const FrequencyWindow& window = {});

/// Pointwise sum of amplitude arrays (s_S).
std::vector<double> summed_amplitude(std::span<const Spectrum> parts);

struct InfidelityResult {
  double n = 0.0;
  double delta_s_over_s = 0.0;
};

/// Sum |a1 - a2| / sum (|a1| + |a2|) over the window.
/// Throws DegenerateFitError when both spectra vanish in the window.
InfidelityResult spectral_infidelity(const Spectrum& s1, const Spectrum& s2,
                                     const FrequencyWindow& window = {});
InfidelityResult spectral_infidelity(std::span<const double> a1, std::span<const double> a2,
                                     std::span<const double> freq_hz,
                                     const FrequencyWindow& window);

// ---------------------------------------------------------------------------
// Multi-Lorentzian least squares

/// h (w/2)^2 / ((f - f0)^2 + (w/2)^2)
struct LorentzianPeak {
  double position_hz = 0.0;
  double height = 0.0;
  double fwhm_hz = 0.0;
};

double lorentzian(const LorentzianPeak& peak, double f);

struct PositionBound {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

enum class PeakConstraint { none, equal_width, equal_width_and_height };

struct MultiLorentzianRequest {
  std::vector<LorentzianPeak> init;
  std::vector<PositionBound> bounds;  // one per peak
  PeakConstraint constraint = PeakConstraint::none;
  FrequencyWindow window = FrequencyWindow::everything();
  int max_iterations = 500;
  double relative_tolerance = 1e-10;
};

struct MultiLorentzianFit {
  std::vector<PeakEstimate> peaks;
  std::vector<LorentzianPeak> parameters;
  std::vector<double> freq_hz;       // fitted grid (window)
  std::vector<double> fitted_curve;  // sum of fitted peaks on freq_hz
  double cost = 0.0;                 // sum of squared residuals
  int iterations = 0;
  bool converged = false;
  PeakConstraint constraint = PeakConstraint::none;
  std::size_t local_maxima = 0;  // of fitted_curve
  bool single_fat_peak() const { return local_maxima == 1; }
};

/// Levenberg-Marquardt fit of 3 or 4 Lorentzians to `spec.amplitude`.
/// Positions are projected onto their bounds, heights kept >= 0 and widths > 0.
/// Convergence: relative cost change < relative_tolerance on an accepted step,
/// else flagged unconverged after max_iterations (no exception).
MultiLorentzianFit fit_multi_lorentzian(const Spectrum& spec, const MultiLorentzianRequest& request);

/// Same engine without the 3/4 peak restriction (used for per-peak widths).
MultiLorentzianFit fit_lorentzians(std::span<const double> freq_hz, std::span<const double> values,
                                   const MultiLorentzianRequest& request);

/// Number of strict local maxima (plateaus counted once).
std::size_t count_local_maxima(std::span<const double> values);

// ---------------------------------------------------------------------------
// Coupling-strength sweep

struct SweepOptions {
  Acquisition acquisition{};
  MonteCarloSettings mc{1000, 1, 0};
  SpectrumOptions spectrum{};
  FrequencyWindow window = FrequencyWindow::everything();
};

struct SweepPoint {
  InfidelityResult infidelity;
  /// Infidelity of the Monte Carlo secular spectrum against its analytic average.
  double noise_floor = 0.0;
};

/// For each magnification n: thermal spectra of the full and secular models
/// with couplings n*J (common random numbers), and their infidelity.
std::vector<SweepPoint> coupling_sweep(const SpinSystemParams& params, const NoiseModel& noise,
                                       std::span<const double> n_values,
                                       const SweepOptions& options);

/// Largest n whose infidelity stays at or below the threshold, scanning the
/// grid from the smallest n and stopping at the first crossing.
std::optional<double> valid_coupling_range(std::span<const SweepPoint> sweep, double threshold);

}  // namespace fresure
