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
#include <cstdint>

#include "fresure/quantum_core.hpp"

namespace fresure {

inline constexpr int kNumSpins = 3;
inline constexpr std::size_t kHilbertDim = 8;

/// Physical constants of the three-spin molecule. All frequencies are cyclic
/// (Hz) in a rotating frame; the 2*pi conversion happens in the Hamiltonian
/// builders only.
///
/// The defaults reproduce the analytic F3 line positions (1088.5, 1039.5,
/// 1020.5, 971.5) Hz via delta3 = 1030, J13 = 68, J23 = 49. delta1, delta2 and
/// J12 are placeholders with |J/(delta_i - delta_j)| <~ 0.1; they are not
/// measured values for C2F3I.
struct SpinSystemParams {
  double larmor_offset_hz = 0.0;
  std::array<double, kNumSpins> chemical_shift_hz{0.0, -13000.0, 1030.0};
  std::array<std::array<double, kNumSpins>, kNumSpins> j_coupling_hz{{
      {0.0, 69.0, 68.0},
      {69.0, 0.0, 49.0},
      {68.0, 49.0, 0.0},
  }};
  double thermal_p = 0.015;
  double pps_q = 0.01;

  /// Coupling between spins i and j (1-based).
  double j(int i, int k) const { return j_coupling_hz[i - 1][k - 1]; }

  /// Throws ArgumentError if J is not symmetric with zero diagonal or q is
  /// outside (0, 1].
  void validate() const;

  /// max |J_ij / (delta_i - delta_j)| over pairs; infinite for degenerate shifts
  /// with nonzero coupling.
  double weak_coupling_ratio() const;
  bool weak_coupling_warning() const { return weak_coupling_ratio() > 0.5; }

  bool operator==(const SpinSystemParams&) const = default;
};

enum class NoiseKind { lorentzian };

/// Stray-field noise eta with Lorentzian (Cauchy) density of FWHM gamma.
struct NoiseModel {
  double gamma_fwhm_hz = 40.0;
  NoiseKind kind = NoiseKind::lorentzian;

  void validate() const;
  /// f(eta) = (gamma / 2pi) / (eta^2 + (gamma/2)^2)
  double density(double eta_hz) const;
};

struct DerivedFrequencies {
  double alpha_hz = 0.0;
  double beta_hz = 0.0;
  double gamma_c_hz = 0.0;
  std::array<double, 4> peak_hz{};  // A, B, C, D
};

enum class HamiltonianModel { full, secular };

/// Heisenberg-coupled H of the three spins in rad/s.
ComplexMatrix build_full_hamiltonian(const SpinSystemParams& params, double eta_hz);

/// Diagonal Ising-coupled approximation of the full H in rad/s.
ComplexMatrix build_secular_hamiltonian(const SpinSystemParams& params, double eta_hz);

ComplexMatrix build_hamiltonian(HamiltonianModel model, const SpinSystemParams& params,
                                double eta_hz);

/// Sum of sigma_iz over all spins.
ComplexMatrix total_sz();

/// Copy with every J_ij scaled by n. Throws ArgumentError for n < 0.
SpinSystemParams magnify_coupling(const SpinSystemParams& params, double n);

DerivedFrequencies derived_frequencies(const SpinSystemParams& params);

/// Position in a counter-based random stream. Each (seed, counter) pair maps
/// to one independent uniform deviate, so draws can be generated in any order
/// or on any worker.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t counter = 0;
};

/// Uniform deviate in the open interval (0, 1).
double uniform_open01(RngState state);

/// Independent stream seed for sub-experiment `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Inverse-CDF Cauchy deviate for a given uniform u in (0, 1).
double eta_from_uniform(const NoiseModel& noise, double u);

double sample_eta(const NoiseModel& noise, RngState state);

}  // namespace fresure
