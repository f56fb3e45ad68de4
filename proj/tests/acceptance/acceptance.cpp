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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "fresure/commands.hpp"
#include "fresure/dynamics.hpp"
#include "fresure/metrology.hpp"
#include "fresure/model.hpp"
#include "fresure/quantum_core.hpp"
#include "fresure/spectra.hpp"
#include "fresure/states.hpp"

using namespace fresure;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const SpinSystemParams kParams{};
const NoiseModel kNoise{};
const Acquisition kAcq{};
const SpectrumOptions kSpec{};
const FrequencyWindow kWindow{};

std::vector<Spectrum> spectra_of(const std::vector<FidRecord>& fids) {
  std::vector<Spectrum> out;
  for (const auto& f : fids) out.push_back(fft_spectrum(f, kSpec));
  return out;
}

// Full-model Monte Carlo spectra at 1e4 draws, shared by criteria 2 and 6.
const std::vector<Spectrum>& full_model_spectra() {
  static const std::vector<Spectrum> spectra = spectra_of(fid_noise_averaged(
      kAllStates, kParams, kNoise, {10000, 20260101, 0}, kAcq, HamiltonianModel::full));
  return spectra;
}

std::vector<double> scaled_sum(const std::vector<Spectrum>& s) {
  const std::vector<Spectrum> pps(s.begin() + 1, s.end());
  std::vector<double> sum = summed_amplitude(pps);
  for (double& v : sum) v *= kParams.thermal_p / kParams.pps_q;
  return sum;
}

void criterion_1(Outcome& o) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed : {1ULL, 99ULL, 123456789ULL}) {
    const auto fids =
        fid_noise_averaged(kAllStates, kParams, kNoise, {200, seed, 0}, kAcq, HamiltonianModel::secular);
    const auto spectra = spectra_of(fids);
    const auto sum = scaled_sum(spectra);
    for (std::size_t k = 0; k < sum.size(); ++k) {
      worst = std::max(worst, std::abs(spectra[0].amplitude[k] - sum[k]));
    }
    for (std::size_t k = 0; k < kAcq.n_samples; ++k) {
      Complex s = 0.0;
      for (std::size_t i = 1; i < 5; ++i) s += fids[i].values[k];
      worst = std::max(worst, std::abs(fids[0].values[k] - s * (kParams.thermal_p / kParams.pps_q)));
    }
  }
  const double dt = seconds_since(t0);
  o.detail << "max |s_T - (p/q) sum| = " << worst << ", " << dt << " s";
  o.require(worst < 1e-10 * 4.0 * kParams.thermal_p, "identity bound");
  o.require(dt < 1.0, "runtime");
}

void criterion_2(Outcome& o) {
  const auto& s = full_model_spectra();
  const auto want = derived_frequencies(kParams).peak_hz;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto peaks = find_peaks(s[i + 1], kWindow, 4);
    o.detail << to_string(kAllStates[i + 1]) << ":";
    for (const auto& p : peaks) o.detail << " " << p.position_hz;
    o.detail << "; ";
    o.require(peaks.size() == 1, "one dominant peak for " + to_string(kAllStates[i + 1]));
    if (!peaks.empty()) {
      o.require(std::abs(peaks[0].position_hz - want[i]) <= 5.0,
                "position of " + to_string(kAllStates[i + 1]));
    }
  }
  const auto sum = scaled_sum(s);
  const double inf =
      spectral_infidelity(s[0].amplitude, sum, s[0].freq_hz, FrequencyWindow::everything())
          .delta_s_over_s;
  o.detail << "sum-vs-thermal infidelity " << inf;
  o.require(inf < 0.02, "infidelity");
}

void criterion_3(Outcome& o) {
  std::vector<FidRecord> mc = fid_noise_averaged(kAllStates, kParams, kNoise, {10000, 3, 0}, kAcq,
                                                 HamiltonianModel::secular);
  for (std::size_t i = 1; i < 5; ++i) {
    const StateLabel st = kAllStates[i];
    const Spectrum a = fft_spectrum(
        fid_analytic_averaged(st, kParams, kNoise.gamma_fwhm_hz, kParams.pps_q, kAcq), kSpec);
    const auto pa = find_peaks(a, kWindow, 1);
    const auto pm = find_peaks(fft_spectrum(mc[i], kSpec), kWindow, 1);
    o.require(pa.size() == 1 && pm.size() == 1, "peak found for " + to_string(st));
    if (pa.empty() || pm.empty()) continue;
    o.detail << to_string(st) << " analytic " << pa[0].fwhm_hz << " mc " << pm[0].fwhm_hz << "; ";
    o.require(std::abs(pa[0].fwhm_hz - 40.0) <= 2.0, "analytic FWHM " + to_string(st));
    o.require(std::abs(pm[0].fwhm_hz - 40.0) <= 4.0, "Monte Carlo FWHM " + to_string(st));
  }
}

void criterion_4(Outcome& o) {
  const std::size_t n = 100000;
  const double q = kParams.pps_q;
  const FidRecord mc = fid_noise_averaged(StateLabel::pps_a, kParams, kNoise, {n, 11, 0}, kAcq,
                                          HamiltonianModel::secular);
  const FidRecord exact =
      fid_analytic_averaged(StateLabel::pps_a, kParams, kNoise.gamma_fwhm_hz, q, kAcq);
  double worst = 0.0;
  for (std::size_t k = 0; k < kAcq.n_samples; ++k) {
    worst = std::max(worst, std::abs(mc.values[k] - exact.values[k]));
  }
  const double bound = 5.0 * q / std::sqrt(static_cast<double>(n));
  const std::size_t k10 = static_cast<std::size_t>(std::lround(0.01 / kAcq.dt_s));
  const double env_exact = std::abs(exact.values[k10]) / q;
  const double env_mc = std::abs(mc.values[k10]) / q;
  o.detail << "max deviation " << worst << " (bound " << bound << "), envelope(10 ms) analytic "
           << env_exact << " mc " << env_mc;
  o.require(worst < bound, "deviation bound");
  o.require(std::abs(env_exact - 0.2846) < 1e-4, "analytic envelope");
  o.require(std::abs(env_mc - 0.2846) < 5.0 / std::sqrt(static_cast<double>(n)), "MC envelope");
}

void criterion_5(Outcome& o) {
  std::vector<Spectrum> s;
  for (StateLabel st : kAllStates) {
    const double amp = st == StateLabel::thermal ? kParams.thermal_p : kParams.pps_q;
    s.push_back(fft_spectrum(fid_analytic_averaged(st, kParams, kNoise.gamma_fwhm_hz, amp, kAcq), kSpec));
  }
  const std::vector<Spectrum> parts(s.begin() + 1, s.end());
  const double lambda = fit_decomposition_scale(s[0], parts, kWindow).lambda;
  const auto mc = spectra_of(
      fid_noise_averaged(kAllStates, kParams, kNoise, {500, 5, 0}, kAcq, HamiltonianModel::secular));
  const std::vector<Spectrum> mc_parts(mc.begin() + 1, mc.end());
  const double lambda_mc = fit_decomposition_scale(mc[0], mc_parts, kWindow).lambda;
  o.detail << "lambda analytic " << lambda << ", Monte Carlo " << lambda_mc;
  o.require(std::abs(lambda - 1.5) <= 1e-3, "analytic lambda");
  o.require(std::abs(lambda_mc - 1.5) <= 1e-3, "Monte Carlo lambda");
}

// Core-plus-tail lines: broader than the noise width, as in a measured thermal spectrum.
double broad_line(double f, double f0, double h) {
  return h * (0.65 * lorentzian({f0, 1.0, 60.0}, f) + 0.35 * lorentzian({f0, 1.0, 200.0}, f));
}

void criterion_6(Outcome& o) {
  const std::array<double, 4> pos{1088.5, 1039.5, 1020.5, 971.5};
  const std::array<double, 4> heights{1.1, 0.9, 1.2, 0.8};
  Spectrum thermal;
  for (double f = 850.0; f <= 1200.0; f += 0.3125) {
    double v = 0.0;
    for (std::size_t i = 0; i < 4; ++i) v += broad_line(f, pos[i], heights[i]);
    thermal.freq_hz.push_back(f);
    thermal.amplitude.push_back(v);
    thermal.complex_values.emplace_back(v, 0.0);
  }
  thermal.bin_hz = 0.3125;
  MultiLorentzianRequest req;
  req.constraint = PeakConstraint::equal_width_and_height;
  for (double f : {1091.3, 1040.0, 1020.5, 974.1}) {
    req.init.push_back({f, 1.0, 40.0});
    req.bounds.push_back({f - 10.0, f + 10.0});
  }
  const MultiLorentzianFit fit = fit_multi_lorentzian(thermal, req);
  o.detail << "constrained fit local maxima " << fit.local_maxima << "; ";
  o.require(fit.single_fat_peak(), "single fat peak");

  const auto& s = full_model_spectra();
  const auto pb = find_peaks(s[2], kWindow, 4);
  const auto pc = find_peaks(s[3], kWindow, 4);
  o.require(pb.size() == 1 && pc.size() == 1, "B and C single-peak");
  if (pb.size() == 1 && pc.size() == 1) {
    const double sep = pb[0].position_hz - pc[0].position_hz;
    o.detail << "decomposed B-C separation " << sep << " Hz";
    o.require(std::abs(sep - 19.0) <= 2.0, "B-C separation");
  }
}

void criterion_7(Outcome& o) {
  const std::vector<double> n_values{0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  SweepOptions opts;
  opts.mc = {1000, 77, 0};
  const auto sweep = coupling_sweep(kParams, kNoise, n_values, opts);
  for (const auto& p : sweep) {
    o.detail << p.infidelity.n << ":" << p.infidelity.delta_s_over_s << " ";
  }
  for (std::size_t i = 1; i < sweep.size(); ++i) {
    const double slack = sweep[i].noise_floor + sweep[i - 1].noise_floor;
    o.require(sweep[i].infidelity.delta_s_over_s >=
                  sweep[i - 1].infidelity.delta_s_over_s - slack,
              "nondecreasing at n=" + std::to_string(n_values[i]));
  }
  o.require(sweep[1].infidelity.delta_s_over_s < sweep[5].infidelity.delta_s_over_s,
            "inf(1) < inf(5)");
  const auto valid = valid_coupling_range(sweep, sweep[2].infidelity.delta_s_over_s);
  o.detail << "valid n <= " << (valid ? *valid : -1.0);
  o.require(valid && std::abs(*valid - 2.0) < 1e-12, "valid range n <= 2");
}

void criterion_8(Outcome& o) {
  const auto white = synthetic_series(4096, 1.0, 0.0, 8);
  const auto rw = allan_deviation(white, octave_m_values(white.size()));
  const double slope = log_log_slope(rw);
  o.detail << "white slope " << slope << "; ";
  o.require(slope >= -0.6 && slope <= -0.4, "white-noise slope");

  const auto drift = synthetic_series(4096, 1.0, 2e-3, 8);
  const auto rd = allan_deviation(drift, octave_m_values(drift.size()));
  const auto lim = resolution_limit(rd);
  o.detail << "drift minimum at M=" << lim.m_at_min << "; ";
  o.require(lim.m_at_min > rd.m_values.front() && lim.m_at_min < rd.m_values.back(),
            "interior minimum");

  ExperimentConfig cfg = default_config(2026);
  cfg.allan.n_measurements = 64;
  cfg.allan.mc_per_measurement = 200;
  const auto pipe = run_allan_pipeline(cfg);
  o.detail << "pipeline minima (Hz):";
  for (const auto& r : pipe.allan) {
    const double m = resolution_limit(r).sigma_min_hz;
    o.detail << " " << m;
    o.require(m < kNoise.gamma_fwhm_hz / 10.0, "pipeline minimum below gamma/10");
  }
}

void criterion_9(Outcome& o) {
  // Propagators of full Hamiltonians are unitary; evolution keeps trace and
  // Hermiticity; total Sz commutes with H.
  const ComplexMatrix sz = total_sz();
  double worst_comm = 0.0;
  bool unitary = true, trace_ok = true, herm_ok = true;
  const DensityMatrix rho0 = initial_state(StateLabel::thermal, kParams);
  for (int i = 0; i < 20; ++i) {
    const double eta = eta_from_uniform(kNoise, uniform_open01({9, static_cast<std::uint64_t>(i)}));
    const SpinSystemParams p = magnify_coupling(kParams, 0.5 + 0.25 * i);
    const ComplexMatrix h = build_full_hamiltonian(p, eta);
    worst_comm = std::max(worst_comm, commutator(h, sz).frobenius_norm() / h.frobenius_norm());
    const auto eig = hermitian_eig(h);
    unitary = unitary && propagator(eig, 1e-3 * i).is_unitary(1e-10);
    const DensityMatrix r = evolve(rho0, h, 1e-3 * i);
    trace_ok = trace_ok && std::abs(r.matrix().trace() - Complex(1.0)) < 1e-12;
    herm_ok = herm_ok && r.matrix().is_hermitian(1e-12);
  }
  o.require(worst_comm < 1e-13, "Sz conservation");
  o.require(unitary, "unitarity");
  o.require(trace_ok, "trace");
  o.require(herm_ok, "Hermiticity");

  // Transform: Parseval, linearity, shift theorem.
  const FidRecord f = fid_analytic_averaged(StateLabel::thermal, kParams, 40.0, 0.015, kAcq);
  const Spectrum sf = fft_spectrum(f, {1, SpectrumMode::absorption, {}});
  double te = 0.0, fe = 0.0;
  for (const Complex& v : f.values) te += std::norm(v) * f.dt_s;
  for (const Complex& v : sf.complex_values) fe += std::norm(v) * sf.bin_hz;
  o.require(std::abs(fe / te - 1.0) < 1e-9, "Parseval");

  const FidRecord g = fid_closed_form(StateLabel::pps_c, kParams, 3.0, 0.01, kAcq);
  FidRecord h = f;
  for (std::size_t k = 0; k < h.n_samples(); ++k) h.values[k] = 2.0 * f.values[k] - 0.5 * g.values[k];
  const Spectrum a = fft_spectrum(f), b = fft_spectrum(g), c = fft_spectrum(h);
  double lin = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const Complex want = 2.0 * a.complex_values[k] - 0.5 * b.complex_values[k];
    lin = std::max(lin, std::abs(c.complex_values[k] - want));
    scale = std::max(scale, std::abs(want));
  }
  o.require(lin < 1e-12 * scale, "linearity");

  FidRecord shifted = g;
  for (std::size_t k = 0; k < shifted.n_samples(); ++k) {
    shifted.values[k] *= std::polar(1.0, 2.0 * std::numbers::pi * 62.5 * shifted.time(k));
  }
  const auto p0 = find_peaks(fft_spectrum(g), FrequencyWindow::everything(), 1);
  const auto p1 = find_peaks(fft_spectrum(shifted), FrequencyWindow::everything(), 1);
  o.require(p0.size() == 1 && p1.size() == 1 &&
                std::abs(p1[0].position_hz - p0[0].position_hz - 62.5) <= a.bin_hz / 2,
            "shift theorem");

  // Sampler quartiles and empirical median.
  const double half = kNoise.gamma_fwhm_hz / 2.0;
  o.require(std::abs(eta_from_uniform(kNoise, 0.25) + half) < 1e-12 &&
                std::abs(eta_from_uniform(kNoise, 0.75) - half) < 1e-12,
            "sampler quartiles");
  std::size_t inside = 0;
  const std::size_t n = 200000;
  for (std::size_t i = 0; i < n; ++i) inside += std::abs(sample_eta(kNoise, {4, i})) <= half;
  o.require(std::abs(static_cast<double>(inside) / n - 0.5) < 0.005, "empirical quartiles");

  // Determinism across worker counts.
  const auto one = fid_noise_averaged(StateLabel::pps_b, kParams, kNoise, {3000, 5, 1}, kAcq,
                                      HamiltonianModel::full);
  const auto many = fid_noise_averaged(StateLabel::pps_b, kParams, kNoise, {3000, 5, 4}, kAcq,
                                       HamiltonianModel::full);
  o.require(one.values == many.values, "worker-count determinism");
  o.detail << "max [H,Sz]/|H| " << worst_comm << ", Parseval ratio " << fe / te;
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
  bool all = true;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (id == 9) {
      const double total = seconds_since(start);
      o.detail << ", total runtime " << total << " s";
      o.require(total < 120.0, "total runtime");
    }
    std::printf("%s criterion %d (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", id, seconds_since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
