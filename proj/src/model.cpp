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

#include "fresure/model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fresure/error.hpp"

namespace fresure {
namespace {

constexpr double kPi = std::numbers::pi;

// Basis index bit for spin i (1-based): spin 1 is the most significant bit.
int z_sign(std::size_t basis, int spin) {
  const std::size_t bit = (basis >> (kNumSpins - spin)) & 1U;
  return bit == 0 ? 1 : -1;
}

// Diagonal of sum_i pi (f0 + delta_i + eta) sigma_iz + sum_{i<j} (pi J_ij / 2) sigma_iz sigma_jz.
std::array<double, kHilbertDim> secular_diagonal(const SpinSystemParams& p, double eta_hz) {
  std::array<double, kHilbertDim> diag{};
  for (std::size_t b = 0; b < kHilbertDim; ++b) {
    double e = 0.0;
    for (int i = 1; i <= kNumSpins; ++i) {
      e += kPi * (p.larmor_offset_hz + p.chemical_shift_hz[i - 1] + eta_hz) * z_sign(b, i);
    }
    for (int i = 1; i <= kNumSpins; ++i) {
      for (int k = i + 1; k <= kNumSpins; ++k) {
        e += 0.5 * kPi * p.j(i, k) * z_sign(b, i) * z_sign(b, k);
      }
    }
    diag[b] = e;
  }
  return diag;
}

}  // namespace

void SpinSystemParams::validate() const {
  for (int i = 0; i < kNumSpins; ++i) {
    if (j_coupling_hz[i][i] != 0.0) {
      throw ArgumentError("J coupling matrix must have zero diagonal");
    }
    for (int k = 0; k < kNumSpins; ++k) {
      if (j_coupling_hz[i][k] != j_coupling_hz[k][i]) {
        throw ArgumentError("J coupling matrix must be symmetric");
      }
    }
  }
  if (!(pps_q > 0.0 && pps_q <= 1.0)) {
    throw ArgumentError("pps_q must lie in (0, 1], got " + std::to_string(pps_q));
  }
}

double SpinSystemParams::weak_coupling_ratio() const {
  double worst = 0.0;
  for (int i = 1; i <= kNumSpins; ++i) {
    for (int k = i + 1; k <= kNumSpins; ++k) {
      const double split = std::abs(chemical_shift_hz[i - 1] - chemical_shift_hz[k - 1]);
      const double coupling = std::abs(j(i, k));
      if (coupling == 0.0) {
        continue;
      }
      if (split == 0.0) {
        return std::numeric_limits<double>::infinity();
      }
      worst = std::max(worst, coupling / split);
    }
  }
  return worst;
}

void NoiseModel::validate() const {
  if (!(gamma_fwhm_hz > 0.0)) {
    throw ArgumentError("noise gamma_fwhm_hz must be positive, got " +
                        std::to_string(gamma_fwhm_hz));
  }
}

double NoiseModel::density(double eta_hz) const {
  const double half = 0.5 * gamma_fwhm_hz;
  return (gamma_fwhm_hz / (2.0 * kPi)) / (eta_hz * eta_hz + half * half);
}

ComplexMatrix build_secular_hamiltonian(const SpinSystemParams& params, double eta_hz) {
  const auto diag = secular_diagonal(params, eta_hz);
  return ComplexMatrix::diagonal(diag);
}

ComplexMatrix build_full_hamiltonian(const SpinSystemParams& params, double eta_hz) {
  ComplexMatrix h = build_secular_hamiltonian(params, eta_hz);
  // Transverse part (pi J / 2)(sx sx + sy sy) = pi J (s+ s- + s- s+): it only
  // swaps antiparallel pairs, so its diagonal is exactly zero.
  for (std::size_t b = 0; b < kHilbertDim; ++b) {
    for (int i = 1; i <= kNumSpins; ++i) {
      for (int k = i + 1; k <= kNumSpins; ++k) {
        if (z_sign(b, i) == z_sign(b, k)) {
          continue;
        }
        const std::size_t flipped =
            b ^ ((std::size_t{1} << (kNumSpins - i)) | (std::size_t{1} << (kNumSpins - k)));
        h(b, flipped) += kPi * params.j(i, k);
      }
    }
  }
  return h;
}

ComplexMatrix build_hamiltonian(HamiltonianModel model, const SpinSystemParams& params,
                                double eta_hz) {
  return model == HamiltonianModel::full ? build_full_hamiltonian(params, eta_hz)
                                         : build_secular_hamiltonian(params, eta_hz);
}

ComplexMatrix total_sz() {
  ComplexMatrix sz(kHilbertDim);
  for (int i = 1; i <= kNumSpins; ++i) {
    sz += pauli_embed(Axis::z, i, kNumSpins);
  }
  return sz;
}

SpinSystemParams magnify_coupling(const SpinSystemParams& params, double n) {
  if (!(n >= 0.0)) {
    throw ArgumentError("coupling magnification must be >= 0, got " + std::to_string(n));
  }
  SpinSystemParams out = params;
  for (auto& row : out.j_coupling_hz) {
    for (double& v : row) {
      v *= n;
    }
  }
  return out;
}

DerivedFrequencies derived_frequencies(const SpinSystemParams& params) {
  DerivedFrequencies d;
  d.alpha_hz = params.larmor_offset_hz + params.chemical_shift_hz[2];
  d.beta_hz = params.j(1, 3) / 2.0;
  d.gamma_c_hz = params.j(2, 3) / 2.0;
  d.peak_hz = {d.alpha_hz + d.beta_hz + d.gamma_c_hz, d.alpha_hz + d.beta_hz - d.gamma_c_hz,
               d.alpha_hz - d.beta_hz + d.gamma_c_hz, d.alpha_hz - d.beta_hz - d.gamma_c_hz};
  return d;
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
  return z ^ (z >> 32);
}

}  // namespace

double uniform_open01(RngState state) {
  // SplitMix64 finalizer applied to a Weyl sequence indexed by the counter.
  const std::uint64_t z = mix64(state.seed + 0x9E3779B97F4A7C15ULL * (state.counter + 1));
  // 53 random bits centred in their bin: never exactly 0 or 1.
  return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed ^ 0x6A09E667F3BCC909ULL) + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

double eta_from_uniform(const NoiseModel& noise, double u) {
  if (u == 0.5) {
    return 0.0;
  }
  return 0.5 * noise.gamma_fwhm_hz * std::tan(kPi * (u - 0.5));
}

double sample_eta(const NoiseModel& noise, RngState state) {
  return eta_from_uniform(noise, uniform_open01(state));
}

}  // namespace fresure
