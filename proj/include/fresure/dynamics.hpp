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
#include <span>
#include <string>
#include <vector>

#include "fresure/model.hpp"
#include "fresure/quantum_core.hpp"
#include "fresure/states.hpp"

namespace fresure {

/// Uniform time grid t_k = k * dt_s, k = 0 .. n_samples-1.
struct Acquisition {
  double dt_s = 2e-4;
  std::size_t n_samples = 4000;
  /// Record only <sigma_x>; the imaginary channel is zeroed.
  bool real_only = false;

  double duration_s() const { return dt_s * static_cast<double>(n_samples); }
  void validate() const;
};

struct FidMeta {
  std::string initial_state;
  std::string noise;
  std::size_t n_averaged = 1;
};

/// Sampled <sigma_3x> + i <sigma_3y>.
struct FidRecord {
  double dt_s = 0.0;
  std::vector<Complex> values;
  FidMeta meta;

  std::size_t n_samples() const { return values.size(); }
  double time(std::size_t k) const { return dt_s * static_cast<double>(k); }
  double acquisition_time_s() const { return dt_s * static_cast<double>(values.size()); }
};

/// Observed spin is F3 (the "system"); F1 and F2 form the environment.
inline constexpr int kObservedSpin = 3;

/// Exact evolution: values[k] = Tr(U_k rho0 U_k^dag (s3x + i s3y)),
/// U_k = exp(-i k dt H), from a single eigendecomposition of H.
FidRecord fid_numeric(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian,
                      const Acquisition& acq);

/// Cosine formulas of the secular model with alpha shifted by eta:
/// PPS X -> amplitude * exp(i 2 pi nu_X t); thermal -> amplitude * sum_X exp(i 2 pi nu_X t).
/// `amplitude` is q for a PPS and p for the thermal state.
FidRecord fid_closed_form(StateLabel label, const SpinSystemParams& params, double eta_hz,
                          double amplitude, const Acquisition& acq);

/// Exact Lorentzian average of the closed form: closed form * exp(-pi gamma t).
/// Only the secular model admits this; `model == full` throws UnsupportedModelError.
FidRecord fid_analytic_averaged(StateLabel label, const SpinSystemParams& params,
                                double gamma_fwhm_hz, double amplitude, const Acquisition& acq,
                                HamiltonianModel model = HamiltonianModel::secular);

/// plain:      draw i uses u_i = uniform_open01({seed, i}).
/// stratified: draw i uses u_i = (i + uniform_open01({seed, i})) / n_mc, one
///             draw per equal-probability stratum of the Cauchy quantile.
/// Both give unbiased averages; stratified removes most of the per-bin ripple
/// that plain sampling leaves in long acquisitions.
enum class MonteCarloSampling { stratified, plain };

struct MonteCarloSettings {
  std::size_t n_mc = 10000;
  std::uint64_t seed = 1;
  /// 0 selects default_worker_count().
  std::size_t workers = 0;
  MonteCarloSampling sampling = MonteCarloSampling::stratified;
};

/// eta of draw `index` under the given settings.
double monte_carlo_eta(const NoiseModel& noise, const MonteCarloSettings& mc, std::size_t index);

/// Draws per reduction chunk. Fixed so results do not depend on worker count.
inline constexpr std::size_t kMonteCarloChunk = 1024;

/// Mean of fid_numeric over n_mc Lorentzian eta draws, for every requested
/// state. Draw i uses eta = monte_carlo_eta(noise, mc, i) for all states
/// (common random numbers), and one eigendecomposition per draw.
std::vector<FidRecord> fid_noise_averaged(std::span<const StateLabel> states,
                                          const SpinSystemParams& params,
                                          const NoiseModel& noise, const MonteCarloSettings& mc,
                                          const Acquisition& acq, HamiltonianModel model);

FidRecord fid_noise_averaged(StateLabel state, const SpinSystemParams& params,
                             const NoiseModel& noise, const MonteCarloSettings& mc,
                             const Acquisition& acq, HamiltonianModel model);

/// Largest |values[k]|.
double max_abs(const FidRecord& fid);

}  // namespace fresure
