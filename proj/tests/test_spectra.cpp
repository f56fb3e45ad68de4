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

#include <catch_amalgamated.hpp>
#include <cmath>
#include <functional>
#include <numbers>

#include "fresure/error.hpp"
#include "fresure/spectra.hpp"

using namespace fresure;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const StateLabel kPps[] = {StateLabel::pps_a, StateLabel::pps_b, StateLabel::pps_c,
                           StateLabel::pps_d};

Spectrum analytic_spectrum(StateLabel s, const SpinSystemParams& params = {},
                           const SpectrumOptions& opts = {}) {
  const double amp = s == StateLabel::thermal ? params.thermal_p : params.pps_q;
  return fft_spectrum(fid_analytic_averaged(s, params, 40.0, amp, {}), opts);
}

// Real spectrum on a uniform grid.
Spectrum synthetic(double lo, double hi, double step, const std::function<double(double)>& f) {
  Spectrum s;
  for (double x = lo; x <= hi + 1e-9; x += step) {
    s.freq_hz.push_back(x);
    s.amplitude.push_back(f(x));
    s.complex_values.emplace_back(f(x), 0.0);
  }
  s.bin_hz = step;
  return s;
}

double lor(double f, double f0, double h, double w) {
  return lorentzian({f0, h, w}, f);
}

}  // namespace

TEST_CASE("constant FID peaks at zero frequency") {
  FidRecord fid;
  fid.dt_s = 1e-3;
  fid.values.assign(256, Complex(1.0));
  const Spectrum s = fft_spectrum(fid, {1, SpectrumMode::magnitude, {}});
  const auto peaks = find_peaks(s, FrequencyWindow::everything(), 3);
  REQUIRE(peaks.size() == 1);
  CHECK_THAT(peaks[0].position_hz, WithinAbs(0.0, s.bin_hz / 2));
}

TEST_CASE("spectrum grid and mode") {
  const Spectrum s = analytic_spectrum(StateLabel::pps_a);
  CHECK(s.size() == 16000);
  CHECK_THAT(s.bin_hz, WithinRel(0.3125, 1e-12));
  CHECK(s.freq_hz[8000] == 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    REQUIRE(s.amplitude[k] == s.complex_values[k].real());
  }
  Spectrum m = s;
  set_mode(m, SpectrumMode::magnitude);
  for (std::size_t k = 0; k < m.size(); ++k) {
    REQUIRE(std::abs(m.amplitude[k] - std::abs(m.complex_values[k])) <= 1e-12 * m.amplitude[k]);
  }
  FidRecord tiny;
  tiny.dt_s = 1e-3;
  tiny.values.assign(1, Complex(1.0));
  CHECK_THROWS_AS(fft_spectrum(tiny), ArgumentError);
  tiny.values.assign(8, Complex(1.0));
  CHECK_THROWS_AS(fft_spectrum(tiny, {0}), ArgumentError);
}

TEST_CASE("analytic PPS line: position and width") {
  const Spectrum s = analytic_spectrum(StateLabel::pps_a);
  const auto peaks = find_peaks(s, {}, 4);
  REQUIRE(peaks.size() == 1);
  CHECK_THAT(peaks[0].position_hz, WithinAbs(1088.5, s.bin_hz / 2));
  CHECK_THAT(peaks[0].fwhm_hz, WithinAbs(40.0, 2.0));
  CHECK_THAT(peaks[0].fwhm_lorentz_hz, WithinAbs(40.0, 2.0));
}

TEST_CASE("four analytic PPS spectra give one peak each with the sum relations") {
  std::vector<double> pos;
  for (StateLabel st : kPps) {
    const auto peaks = find_peaks(analytic_spectrum(st), {}, 4);
    REQUIRE(peaks.size() == 1);
    pos.push_back(peaks[0].position_hz);
  }
  CHECK_THAT(pos[0] + pos[3], WithinAbs(pos[1] + pos[2], 0.2));
  // find_peaks orders by position; the thermal spectrum resolves A and D only.
  const auto thermal = find_peaks(analytic_spectrum(StateLabel::thermal), {}, 4);
  CHECK(thermal.size() >= 2);
}

TEST_CASE("Parseval without window or padding") {
  const FidRecord fid = fid_analytic_averaged(StateLabel::thermal, {}, 40.0, 0.015, {});
  const Spectrum s = fft_spectrum(fid, {1, SpectrumMode::absorption, {}});
  double time_energy = 0.0, freq_energy = 0.0;
  for (const Complex& v : fid.values) time_energy += std::norm(v) * fid.dt_s;
  for (const Complex& v : s.complex_values) freq_energy += std::norm(v) * s.bin_hz;
  CHECK_THAT(freq_energy / time_energy, WithinAbs(1.0, 1e-9));
}

TEST_CASE("transform is linear") {
  const FidRecord f = fid_analytic_averaged(StateLabel::pps_a, {}, 40.0, 0.01, {});
  const FidRecord g = fid_closed_form(StateLabel::thermal, {}, 7.0, 0.015, {});
  const double a = 2.5, b = -0.75;
  FidRecord h = f;
  for (std::size_t k = 0; k < h.n_samples(); ++k) h.values[k] = a * f.values[k] + b * g.values[k];
  for (SpectrumMode mode : {SpectrumMode::absorption}) {
    const SpectrumOptions o{4, mode, {}};
    const Spectrum sf = fft_spectrum(f, o), sg = fft_spectrum(g, o), sh = fft_spectrum(h, o);
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < sh.size(); ++k) {
      const Complex want = a * sf.complex_values[k] + b * sg.complex_values[k];
      worst = std::max(worst, std::abs(sh.complex_values[k] - want));
      scale = std::max(scale, std::abs(want));
    }
    CHECK(worst < 1e-10 * scale);
  }
}

TEST_CASE("frequency shift theorem") {
  const FidRecord f = fid_analytic_averaged(StateLabel::pps_b, {}, 40.0, 0.01, {});
  for (double shift : {-250.0, 37.3, 100.0}) {
    FidRecord g = f;
    for (std::size_t k = 0; k < g.n_samples(); ++k) {
      g.values[k] *= std::polar(1.0, 2.0 * std::numbers::pi * shift * g.time(k));
    }
    const Spectrum sf = fft_spectrum(f), sg = fft_spectrum(g);
    const auto pf = find_peaks(sf, FrequencyWindow::everything(), 1);
    const auto pg = find_peaks(sg, FrequencyWindow::everything(), 1);
    REQUIRE(pf.size() == 1);
    REQUIRE(pg.size() == 1);
    CHECK_THAT(pg[0].position_hz - pf[0].position_hz, WithinAbs(shift, sf.bin_hz / 2));
  }
}

TEST_CASE("exponential apodization adds its rate to the width") {
  const Spectrum s = analytic_spectrum(StateLabel::pps_a, {},
                                       {4, SpectrumMode::absorption, {WindowKind::exponential, 10.0}});
  const auto peaks = find_peaks(s, {}, 1);
  REQUIRE(peaks.size() == 1);
  CHECK_THAT(peaks[0].fwhm_hz, WithinAbs(50.0, 2.0));
}

TEST_CASE("synthetic Lorentzian widths") {
  const Spectrum s = synthetic(800, 1300, 0.3125, [](double f) { return lor(f, 1040.0, 2.0, 40.0); });
  const auto peaks = find_peaks(s, {}, 2);
  REQUIRE(peaks.size() == 1);
  CHECK_THAT(peaks[0].position_hz, WithinAbs(1040.0, 0.01));
  CHECK_THAT(peaks[0].fwhm_hz, WithinAbs(40.0, 1.0));
  CHECK_THAT(peaks[0].fwhm_lorentz_hz, WithinAbs(40.0, 1.0));
  CHECK_THAT(peaks[0].height, WithinRel(2.0, 1e-3));
}

TEST_CASE("prominence rejects small ripple") {
  const Spectrum s = synthetic(800, 1300, 0.3125, [](double f) {
    return lor(f, 1000.0, 1.0, 40.0) + 0.01 * std::sin(f * 2.0);
  });
  CHECK(find_peaks(s, {}, 10).size() == 1);
  CHECK(find_peaks(s, {}, 10, {0.0, 0.7}).size() > 1);
}

TEST_CASE("decomposition scale") {
  const SpinSystemParams params{};
  const Spectrum thermal = analytic_spectrum(StateLabel::thermal, params);
  std::vector<Spectrum> parts;
  for (StateLabel st : kPps) parts.push_back(analytic_spectrum(st, params));
  const DecompositionResult r = fit_decomposition_scale(thermal, parts);
  CHECK_THAT(r.lambda, WithinAbs(1.5, 1e-3));
  CHECK(r.window.lo_hz == 850.0);
  CHECK(r.window.hi_hz == 1200.0);

  // Thermal equal to the plain sum of parts.
  Spectrum summed = thermal;
  summed.amplitude = summed_amplitude(parts);
  const DecompositionResult one = fit_decomposition_scale(summed, parts);
  CHECK_THAT(one.lambda, WithinAbs(1.0, 1e-12));
  CHECK(one.residual < 1e-20);

  const std::vector<Spectrum> copies(4, thermal);
  CHECK_THAT(fit_decomposition_scale(thermal, copies).lambda, WithinAbs(0.25, 1e-12));

  Spectrum other = thermal;
  other.freq_hz.pop_back();
  other.amplitude.pop_back();
  other.complex_values.pop_back();
  const std::vector<Spectrum> bad{other, parts[1], parts[2], parts[3]};
  CHECK_THROWS_AS(fit_decomposition_scale(thermal, bad), ArgumentError);

  std::vector<Spectrum> silent = parts;
  for (auto& p : silent) std::fill(p.amplitude.begin(), p.amplitude.end(), 0.0);
  CHECK_THROWS_AS(fit_decomposition_scale(thermal, silent), DegenerateFitError);
}

TEST_CASE("spectral infidelity") {
  const Spectrum a = analytic_spectrum(StateLabel::pps_a);
  const Spectrum d = analytic_spectrum(StateLabel::pps_d);
  CHECK(spectral_infidelity(a, a).delta_s_over_s == 0.0);
  CHECK(spectral_infidelity(a, d).delta_s_over_s == spectral_infidelity(d, a).delta_s_over_s);
  const Spectrum left = synthetic(0, 100, 1, [](double f) { return f < 50 ? 1.0 : 0.0; });
  const Spectrum right = synthetic(0, 100, 1, [](double f) { return f < 50 ? 0.0 : 1.0; });
  CHECK(spectral_infidelity(left, right, FrequencyWindow::everything()).delta_s_over_s == 1.0);
  const Spectrum zero = synthetic(0, 100, 1, [](double) { return 0.0; });
  CHECK_THROWS_AS(spectral_infidelity(zero, zero, FrequencyWindow::everything()),
                  DegenerateFitError);
}

TEST_CASE("sweep noise floor shrinks like one over root n") {
  const double n[] = {0.0};
  SweepOptions lo, hi;
  lo.mc = {2000, 4, 0};
  hi.mc = {8000, 4, 0};
  const double f_lo = coupling_sweep(SpinSystemParams{}, NoiseModel{}, n, lo)[0].noise_floor;
  const double f_hi = coupling_sweep(SpinSystemParams{}, NoiseModel{}, n, hi)[0].noise_floor;
  INFO(f_lo << " " << f_hi);
  CHECK(f_hi / f_lo > 0.35);
  CHECK(f_hi / f_lo < 0.7);
}

TEST_CASE("secular approximation degrades with coupling strength") {
  SweepOptions o;
  o.mc = {2000, 4, 0};
  const double n[] = {0.0, 1.0, 5.0};
  const auto sweep = coupling_sweep(SpinSystemParams{}, NoiseModel{}, n, o);
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].infidelity.delta_s_over_s < 1e-12);
  CHECK(sweep[1].infidelity.delta_s_over_s < sweep[2].infidelity.delta_s_over_s);
  for (const auto& p : sweep) CHECK(p.noise_floor > 0.0);

  const auto again = coupling_sweep(SpinSystemParams{}, NoiseModel{}, n, o);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(again[i].infidelity.delta_s_over_s == sweep[i].infidelity.delta_s_over_s);
  }
  CHECK(valid_coupling_range(sweep, sweep[1].infidelity.delta_s_over_s) == 1.0);
  CHECK(valid_coupling_range(sweep, -1.0) == std::nullopt);
  CHECK(valid_coupling_range(sweep, 1.0) == 5.0);
}
