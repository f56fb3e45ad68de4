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

#include "fresure/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fresure/error.hpp"
#include "fresure/kernels.hpp"
#include "fresure/parallel.hpp"

namespace fresure {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// s3x + i s3y = 2 s3+; its expectation is <s3x> + i <s3y>.
const ComplexMatrix& transverse_observable() {
  static const ComplexMatrix op =
      pauli_embed(Axis::x, kObservedSpin, kNumSpins) +
      pauli_embed(Axis::y, kObservedSpin, kNumSpins) * Complex(0.0, 1.0);
  return op;
}

EigenSystem eigensystem(const ComplexMatrix& h) {
  if (h.is_diagonal()) {
    EigenSystem eig;
    eig.values.resize(h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i) {
      if (h(i, i).imag() != 0.0) {
        throw ValidationError("Hamiltonian is not Hermitian (complex diagonal)");
      }
      eig.values[i] = h(i, i).real();
    }
    eig.vectors = ComplexMatrix::identity(h.dim());
    return eig;
  }
  return hermitian_eig(h);
}

ComplexMatrix to_eigenbasis(const EigenSystem& eig, const ComplexMatrix& op) {
  if (eig.vectors == ComplexMatrix::identity(op.dim())) {
    return op;
  }
  return eig.vectors.adjoint() * op * eig.vectors;
}

// Tr(rho(t) O) = sum_{m,n} rho'_mn O'_nm exp(-i (E_m - E_n) t) in the eigenbasis.
struct PhasorTerms {
  std::vector<double> c_re, c_im, w_re, w_im;

  void collect(const EigenSystem& eig, const ComplexMatrix& rho_eig, const ComplexMatrix& obs_eig,
               double dt) {
    c_re.clear();
    c_im.clear();
    w_re.clear();
    w_im.clear();
    const std::size_t n = rho_eig.dim();
    double largest = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < n; ++k) {
        largest = std::max(largest, std::abs(rho_eig(m, k) * obs_eig(k, m)));
      }
    }
    const double floor = 1e-15 * largest;
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < n; ++k) {
        const Complex c = rho_eig(m, k) * obs_eig(k, m);
        if (c == Complex(0.0) || std::abs(c) < floor) {
          continue;
        }
        const Complex w = std::polar(1.0, -(eig.values[m] - eig.values[k]) * dt);
        c_re.push_back(c.real());
        c_im.push_back(c.imag());
        w_re.push_back(w.real());
        w_im.push_back(w.imag());
      }
    }
  }

  void accumulate(double* out_re, double* out_im, std::size_t n_samples) const {
    kernels::active().phasor_accumulate(c_re.data(), c_im.data(), w_re.data(), w_im.data(),
                                        c_re.size(), out_re, out_im, n_samples);
  }
};

void require_dims(const DensityMatrix& rho, const ComplexMatrix& h) {
  if (rho.dim() != h.dim()) {
    throw ArgumentError("FID: density matrix dim " + std::to_string(rho.dim()) +
                        " != Hamiltonian dim " + std::to_string(h.dim()));
  }
  if (h.dim() != kHilbertDim) {
    throw ArgumentError("FID: expected an 8x8 three-spin operator");
  }
}

std::string describe(const NoiseModel& noise) {
  std::ostringstream os;
  os << "lorentzian gamma_fwhm_hz=" << noise.gamma_fwhm_hz;
  return os.str();
}

FidRecord make_record(const Acquisition& acq, std::string state, std::string noise,
                      std::size_t n_averaged) {
  FidRecord fid;
  fid.dt_s = acq.dt_s;
  fid.values.resize(acq.n_samples);
  fid.meta = {std::move(state), std::move(noise), n_averaged};
  return fid;
}

}  // namespace

void Acquisition::validate() const {
  if (!(dt_s > 0.0)) {
    throw ArgumentError("acquisition dt_s must be positive");
  }
  if (n_samples < 2) {
    throw ArgumentError("acquisition needs at least 2 samples");
  }
}

FidRecord fid_numeric(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian,
                      const Acquisition& acq) {
  acq.validate();
  require_dims(rho0, hamiltonian);
  const EigenSystem eig = eigensystem(hamiltonian);
  PhasorTerms terms;
  terms.collect(eig, to_eigenbasis(eig, rho0.matrix()), to_eigenbasis(eig, transverse_observable()),
                acq.dt_s);
  std::vector<double> re(acq.n_samples, 0.0);
  std::vector<double> im(acq.n_samples, 0.0);
  terms.accumulate(re.data(), im.data(), acq.n_samples);

  FidRecord fid = make_record(acq, "custom", "none", 1);
  for (std::size_t k = 0; k < acq.n_samples; ++k) {
    fid.values[k] = {re[k], acq.real_only ? 0.0 : im[k]};
  }
  return fid;
}

FidRecord fid_closed_form(StateLabel label, const SpinSystemParams& params, double eta_hz,
                          double amplitude, const Acquisition& acq) {
  acq.validate();
  const DerivedFrequencies freqs = derived_frequencies(params);
  std::vector<double> lines;
  if (const auto pps = to_pps(label)) {
    lines.push_back(freqs.peak_hz[static_cast<std::size_t>(*pps)] + eta_hz);
  } else {
    for (double f : freqs.peak_hz) {
      lines.push_back(f + eta_hz);
    }
  }
  FidRecord fid = make_record(acq, to_string(label), "none", 1);
  for (std::size_t k = 0; k < acq.n_samples; ++k) {
    const double t = fid.time(k);
    double re = 0.0;
    double im = 0.0;
    for (double f : lines) {
      re += std::cos(kTwoPi * f * t);
      im += std::sin(kTwoPi * f * t);
    }
    fid.values[k] = {amplitude * re, acq.real_only ? 0.0 : amplitude * im};
  }
  return fid;
}

FidRecord fid_analytic_averaged(StateLabel label, const SpinSystemParams& params,
                                double gamma_fwhm_hz, double amplitude, const Acquisition& acq,
                                HamiltonianModel model) {
  if (model != HamiltonianModel::secular) {
    throw UnsupportedModelError(
        "analytic noise average exists only for the secular Hamiltonian; use Monte Carlo");
  }
  FidRecord fid = fid_closed_form(label, params, 0.0, amplitude, acq);
  for (std::size_t k = 0; k < fid.n_samples(); ++k) {
    fid.values[k] *= std::exp(-std::numbers::pi * gamma_fwhm_hz * fid.time(k));
  }
  NoiseModel noise{gamma_fwhm_hz, NoiseKind::lorentzian};
  fid.meta.noise = describe(noise) + " (analytic)";
  return fid;
}

double monte_carlo_eta(const NoiseModel& noise, const MonteCarloSettings& mc, std::size_t index) {
  const double v = uniform_open01({mc.seed, index});
  if (mc.sampling == MonteCarloSampling::plain) {
    return eta_from_uniform(noise, v);
  }
  double u = (static_cast<double>(index) + v) / static_cast<double>(mc.n_mc);
  u = std::clamp(u, 0x1.0p-53, 1.0 - 0x1.0p-53);
  return eta_from_uniform(noise, u);
}

std::vector<FidRecord> fid_noise_averaged(std::span<const StateLabel> states,
                                          const SpinSystemParams& params,
                                          const NoiseModel& noise, const MonteCarloSettings& mc,
                                          const Acquisition& acq, HamiltonianModel model) {
  acq.validate();
  noise.validate();
  params.validate();
  if (mc.n_mc < 1) {
    throw ArgumentError("n_mc must be >= 1");
  }
  const std::size_t n = acq.n_samples;
  const std::size_t n_states = states.size();
  std::vector<ComplexMatrix> rho0;
  rho0.reserve(n_states);
  for (StateLabel s : states) {
    rho0.push_back(initial_state(s, params).matrix());
  }

  const std::size_t n_chunks = (mc.n_mc + kMonteCarloChunk - 1) / kMonteCarloChunk;
  // partial[chunk][state] holds interleaved (re..., im...) chunk sums.
  std::vector<std::vector<std::vector<double>>> partial(
      n_chunks, std::vector<std::vector<double>>(n_states));

  parallel_for(
      n_chunks,
      [&](std::size_t chunk) {
        const auto& kern = kernels::active();
        const std::size_t first = chunk * kMonteCarloChunk;
        const std::size_t last = std::min(mc.n_mc, first + kMonteCarloChunk);
        std::vector<double> scratch(2 * n);
        std::vector<std::vector<double>> sum(n_states, std::vector<double>(2 * n, 0.0));
        std::vector<std::vector<double>> comp(n_states, std::vector<double>(2 * n, 0.0));
        PhasorTerms terms;
        for (std::size_t draw = first; draw < last; ++draw) {
          const double eta = monte_carlo_eta(noise, mc, draw);
          const EigenSystem eig = eigensystem(build_hamiltonian(model, params, eta));
          const ComplexMatrix obs = to_eigenbasis(eig, transverse_observable());
          for (std::size_t s = 0; s < n_states; ++s) {
            terms.collect(eig, to_eigenbasis(eig, rho0[s]), obs, acq.dt_s);
            std::fill(scratch.begin(), scratch.end(), 0.0);
            terms.accumulate(scratch.data(), scratch.data() + n, n);
            kern.compensated_add(sum[s].data(), comp[s].data(), scratch.data(), 2 * n);
          }
        }
        for (std::size_t s = 0; s < n_states; ++s) {
          for (std::size_t k = 0; k < 2 * n; ++k) {
            sum[s][k] += comp[s][k];
          }
          partial[chunk][s] = std::move(sum[s]);
        }
      },
      mc.workers);

  // Fixed pairwise tree over chunk index.
  for (std::size_t stride = 1; stride < n_chunks; stride *= 2) {
    for (std::size_t c = 0; c + stride < n_chunks; c += 2 * stride) {
      for (std::size_t s = 0; s < n_states; ++s) {
        auto& dst = partial[c][s];
        const auto& src = partial[c + stride][s];
        for (std::size_t k = 0; k < 2 * n; ++k) {
          dst[k] += src[k];
        }
      }
    }
  }

  std::vector<FidRecord> out;
  out.reserve(n_states);
  const double inv = 1.0 / static_cast<double>(mc.n_mc);
  for (std::size_t s = 0; s < n_states; ++s) {
    FidRecord fid = make_record(acq, to_string(states[s]), describe(noise), mc.n_mc);
    const auto& acc = partial[0][s];
    for (std::size_t k = 0; k < n; ++k) {
      fid.values[k] = {acc[k] * inv, acq.real_only ? 0.0 : acc[n + k] * inv};
    }
    out.push_back(std::move(fid));
  }
  return out;
}

FidRecord fid_noise_averaged(StateLabel state, const SpinSystemParams& params,
                             const NoiseModel& noise, const MonteCarloSettings& mc,
                             const Acquisition& acq, HamiltonianModel model) {
  const StateLabel one[] = {state};
  return std::move(fid_noise_averaged(one, params, noise, mc, acq, model).front());
}

double max_abs(const FidRecord& fid) {
  double m = 0.0;
  for (const Complex& z : fid.values) {
    m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace fresure
