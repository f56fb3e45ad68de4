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

#include "fresure/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

#include "fresure/error.hpp"
#include "fresure/kernels.hpp"

namespace fresure {
namespace {

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

void forward_dft(std::vector<Complex>& data) {
  const int n = static_cast<int>(data.size());
  FftwBuffer buf(fftw_alloc_complex(data.size()));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, buf.get(), buf.get(), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int k = 0; k < n; ++k) {
    buf[k][0] = data[k].real();
    buf[k][1] = data[k].imag();
  }
  fftw_execute(plan);
  for (int k = 0; k < n; ++k) {
    data[k] = {buf[k][0], buf[k][1]};
  }
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

// Parabola through (-1, ym), (0, y0), (1, yp): vertex offset and height.
std::pair<double, double> parabolic_vertex(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (denom >= 0.0) {
    return {0.0, y0};
  }
  const double offset = 0.5 * (ym - yp) / denom;
  return {offset, y0 - 0.25 * (ym - yp) * offset};
}

double interpolate_crossing(double f0, double y0, double f1, double y1, double level) {
  if (y1 == y0) {
    return 0.5 * (f0 + f1);
  }
  return f0 + (level - y0) * (f1 - f0) / (y1 - y0);
}

}  // namespace

FrequencyWindow FrequencyWindow::everything() {
  return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
}

void set_mode(Spectrum& spec, SpectrumMode mode) {
  spec.mode = mode;
  const std::size_t n = spec.complex_values.size();
  spec.amplitude.resize(n);
  if (mode == SpectrumMode::absorption) {
    for (std::size_t k = 0; k < n; ++k) {
      spec.amplitude[k] = spec.complex_values[k].real();
    }
    return;
  }
  std::vector<double> re(n);
  std::vector<double> im(n);
  for (std::size_t k = 0; k < n; ++k) {
    re[k] = spec.complex_values[k].real();
    im[k] = spec.complex_values[k].imag();
  }
  kernels::active().magnitude(re.data(), im.data(), spec.amplitude.data(), n);
}

Spectrum fft_spectrum(const FidRecord& fid, const SpectrumOptions& options) {
  if (options.zero_pad_factor < 1) {
    throw ArgumentError("zero_pad_factor must be >= 1");
  }
  if (fid.n_samples() < 2) {
    throw ArgumentError("FFT needs at least 2 FID samples");
  }
  if (!(fid.dt_s > 0.0)) {
    throw ArgumentError("FID sampling interval must be positive");
  }
  const std::size_t n = fid.n_samples() * options.zero_pad_factor;
  std::vector<Complex> data(n, Complex(0.0));
  for (std::size_t k = 0; k < fid.n_samples(); ++k) {
    double weight = 1.0;
    if (options.window.kind == WindowKind::exponential) {
      weight = std::exp(-std::numbers::pi * options.window.rate_hz * fid.time(k));
    }
    data[k] = fid.values[k] * weight;
  }
  forward_dft(data);

  Spectrum spec;
  spec.bin_hz = 1.0 / (static_cast<double>(n) * fid.dt_s);
  spec.window = options.window;
  spec.freq_hz.resize(n);
  spec.complex_values.resize(n);
  const std::size_t half = n / 2;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = (k + n - half) % n;
    spec.freq_hz[k] = (static_cast<double>(k) - static_cast<double>(half)) * spec.bin_hz;
    spec.complex_values[k] = data[src] * fid.dt_s;
  }
  set_mode(spec, options.mode);
  return spec;
}

std::optional<std::pair<std::size_t, std::size_t>> window_indices(const Spectrum& spec,
                                                                  const FrequencyWindow& window) {
  const auto first = std::lower_bound(spec.freq_hz.begin(), spec.freq_hz.end(), window.lo_hz);
  const auto past = std::upper_bound(spec.freq_hz.begin(), spec.freq_hz.end(), window.hi_hz);
  if (first >= past) {
    return std::nullopt;
  }
  return std::pair{static_cast<std::size_t>(first - spec.freq_hz.begin()),
                   static_cast<std::size_t>(past - spec.freq_hz.begin()) - 1};
}

std::vector<PeakEstimate> find_peaks(const Spectrum& spec, const FrequencyWindow& window,
                                     std::size_t max_peaks, const PeakOptions& options) {
  std::vector<PeakEstimate> out;
  const auto range = window_indices(spec, window);
  if (!range || max_peaks == 0) {
    return out;
  }
  const auto [lo, hi] = *range;
  const auto& y = spec.amplitude;
  const double wmax = *std::max_element(y.begin() + lo, y.begin() + hi + 1);
  if (!(wmax > 0.0)) {
    return out;
  }
  const double threshold = options.prominence_fraction * wmax;

  std::vector<std::size_t> candidates;
  for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi && k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1]) || y[k] < threshold) {
      continue;
    }
    // Topographic prominence within the window.
    double left_min = y[k];
    for (std::size_t i = k; i-- > lo;) {
      if (y[i] > y[k]) {
        break;
      }
      left_min = std::min(left_min, y[i]);
    }
    double right_min = y[k];
    for (std::size_t i = k + 1; i <= hi; ++i) {
      if (y[i] > y[k]) {
        break;
      }
      right_min = std::min(right_min, y[i]);
    }
    if (y[k] - std::max(left_min, right_min) >= threshold) {
      candidates.push_back(k);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  if (candidates.size() > max_peaks) {
    candidates.resize(max_peaks);
  }
  std::sort(candidates.begin(), candidates.end());

  for (std::size_t k : candidates) {
    PeakEstimate peak;
    const auto [offset, height] = parabolic_vertex(y[k - 1], y[k], y[k + 1]);
    peak.position_hz = spec.freq_hz[k] + offset * spec.bin_hz;
    peak.height = height;

    const double half = 0.5 * height;
    std::size_t l = k;
    while (l > 0 && y[l] > half) {
      --l;
    }
    std::size_t r = k;
    while (r + 1 < y.size() && y[r] > half) {
      ++r;
    }
    const double f_left = y[l] > half ? spec.freq_hz[l]
                                      : interpolate_crossing(spec.freq_hz[l], y[l],
                                                             spec.freq_hz[l + 1], y[l + 1], half);
    const double f_right = y[r] > half ? spec.freq_hz[r]
                                       : interpolate_crossing(spec.freq_hz[r - 1], y[r - 1],
                                                              spec.freq_hz[r], y[r], half);
    peak.fwhm_hz = f_right - f_left;

    // Lorentzian width from the top of the line only.
    const double level = options.lorentz_fit_fraction * y[k];
    std::size_t a = k;
    while (a > 0 && y[a - 1] >= level) {
      --a;
    }
    std::size_t b = k;
    while (b + 1 < y.size() && y[b + 1] >= level) {
      ++b;
    }
    a = std::min(a, k - 1);
    b = std::max(b, k + 1);
    MultiLorentzianRequest req;
    const double w0 = peak.fwhm_hz > 0.0 ? peak.fwhm_hz : 3.0 * spec.bin_hz;
    req.init = {{peak.position_hz, peak.height, w0}};
    req.bounds = {{peak.position_hz - w0, peak.position_hz + w0}};
    const std::span<const double> fs(spec.freq_hz.data() + a, b - a + 1);
    const std::span<const double> ys(y.data() + a, b - a + 1);
    const MultiLorentzianFit fit = fit_lorentzians(fs, ys, req);
    peak.fwhm_lorentz_hz = fit.parameters.front().fwhm_hz;
    peak.position_uncertainty_hz = fit.peaks.front().position_uncertainty_hz;
    out.push_back(peak);
  }
  return out;
}

void require_same_grid(const Spectrum& a, const Spectrum& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw ArgumentError("spectra are on different grids (sizes " + std::to_string(a.size()) +
                        " and " + std::to_string(b.size()) + ")");
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(a.bin_hz));
  if (std::abs(a.bin_hz - b.bin_hz) > tol || std::abs(a.freq_hz.front() - b.freq_hz.front()) > tol) {
    throw ArgumentError("spectra are on different frequency grids");
  }
}

std::vector<double> summed_amplitude(std::span<const Spectrum> parts) {
  if (parts.empty()) {
    throw ArgumentError("no spectra to sum");
  }
  std::vector<double> sum(parts.front().size(), 0.0);
  for (const Spectrum& p : parts) {
    require_same_grid(parts.front(), p);
    for (std::size_t k = 0; k < sum.size(); ++k) {
      sum[k] += p.amplitude[k];
    }
  }
  return sum;
}

DecompositionResult fit_decomposition_scale(const Spectrum& thermal, std::span<const Spectrum> parts,
                                            const FrequencyWindow& window) {
  const std::vector<double> s_sum = summed_amplitude(parts);
  require_same_grid(thermal, parts.front());
  const auto range = window_indices(thermal, window);
  if (!range) {
    throw DegenerateFitError("decomposition window contains no frequency bins");
  }
  double cross = 0.0;
  double energy = 0.0;
  for (std::size_t k = range->first; k <= range->second; ++k) {
    cross += thermal.amplitude[k] * s_sum[k];
    energy += s_sum[k] * s_sum[k];
  }
  if (!(energy > 0.0)) {
    throw DegenerateFitError("summed PPS spectrum has zero energy in the window");
  }
  DecompositionResult result;
  result.lambda = cross / energy;
  result.window = window;
  for (std::size_t k = range->first; k <= range->second; ++k) {
    const double r = thermal.amplitude[k] - result.lambda * s_sum[k];
    result.residual += r * r * thermal.bin_hz;
  }
  return result;
}

InfidelityResult spectral_infidelity(std::span<const double> a1, std::span<const double> a2,
                                     std::span<const double> freq_hz,
                                     const FrequencyWindow& window) {
  if (a1.size() != a2.size() || a1.size() != freq_hz.size()) {
    throw ArgumentError("spectral_infidelity: arrays on different grids");
  }
  double diff = 0.0;
  double total = 0.0;
  for (std::size_t k = 0; k < a1.size(); ++k) {
    if (!window.contains(freq_hz[k])) {
      continue;
    }
    diff += std::abs(a1[k] - a2[k]);
    total += std::abs(a1[k]) + std::abs(a2[k]);
  }
  if (!(total > 0.0)) {
    throw DegenerateFitError("spectral_infidelity: both spectra vanish in the window");
  }
  return {0.0, diff / total};
}

InfidelityResult spectral_infidelity(const Spectrum& s1, const Spectrum& s2,
                                     const FrequencyWindow& window) {
  require_same_grid(s1, s2);
  return spectral_infidelity(s1.amplitude, s2.amplitude, s1.freq_hz, window);
}

std::vector<SweepPoint> coupling_sweep(const SpinSystemParams& params, const NoiseModel& noise,
                                       std::span<const double> n_values,
                                       const SweepOptions& options) {
  std::vector<SweepPoint> out;
  out.reserve(n_values.size());
  const StateLabel thermal[] = {StateLabel::thermal};
  for (double n : n_values) {
    const SpinSystemParams scaled = magnify_coupling(params, n);
    const FidRecord full = fid_noise_averaged(thermal, scaled, noise, options.mc,
                                              options.acquisition, HamiltonianModel::full)
                               .front();
    const FidRecord secular = fid_noise_averaged(thermal, scaled, noise, options.mc,
                                                 options.acquisition, HamiltonianModel::secular)
                                  .front();
    const FidRecord exact = fid_analytic_averaged(StateLabel::thermal, scaled, noise.gamma_fwhm_hz,
                                                  scaled.thermal_p, options.acquisition);
    const Spectrum s_full = fft_spectrum(full, options.spectrum);
    const Spectrum s_sec = fft_spectrum(secular, options.spectrum);
    const Spectrum s_exact = fft_spectrum(exact, options.spectrum);

    SweepPoint point;
    point.infidelity = spectral_infidelity(s_sec, s_full, options.window);
    point.infidelity.n = n;
    point.noise_floor = spectral_infidelity(s_sec, s_exact, options.window).delta_s_over_s;
    out.push_back(point);
  }
  return out;
}

std::optional<double> valid_coupling_range(std::span<const SweepPoint> sweep, double threshold) {
  std::vector<SweepPoint> sorted(sweep.begin(), sweep.end());
  std::sort(sorted.begin(), sorted.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return a.infidelity.n < b.infidelity.n;
  });
  std::optional<double> best;
  for (const SweepPoint& p : sorted) {
    if (p.infidelity.delta_s_over_s > threshold) {
      break;
    }
    best = p.infidelity.n;
  }
  return best;
}

}  // namespace fresure
