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

#include "fresure/states.hpp"

#include <cmath>

#include "fresure/error.hpp"

namespace fresure {

StateLabel to_state(PpsLabel label) {
  return static_cast<StateLabel>(static_cast<int>(label) + 1);
}

std::optional<PpsLabel> to_pps(StateLabel label) {
  if (label == StateLabel::thermal) {
    return std::nullopt;
  }
  return static_cast<PpsLabel>(static_cast<int>(label) - 1);
}

std::string to_string(StateLabel label) {
  switch (label) {
    case StateLabel::thermal:
      return "thermal";
    case StateLabel::pps_a:
      return "ppsA";
    case StateLabel::pps_b:
      return "ppsB";
    case StateLabel::pps_c:
      return "ppsC";
    case StateLabel::pps_d:
      return "ppsD";
  }
  return "unknown";
}

std::optional<StateLabel> parse_state(std::string_view text) {
  for (StateLabel s : kAllStates) {
    if (text == to_string(s)) {
      return s;
    }
  }
  return std::nullopt;
}

DensityMatrix thermal_equilibrium(const SpinSystemParams& params) {
  ComplexMatrix rho = ComplexMatrix::identity(kHilbertDim) * Complex(1.0 / 8.0);
  rho += total_sz() * Complex(params.thermal_p / 2.0);
  return DensityMatrix(std::move(rho));
}

DensityMatrix rotate(const DensityMatrix& rho, int target, Axis axis, double angle) {
  const int n = rho.nqubits();
  const ComplexMatrix sigma = pauli_embed(axis, target, n);
  // sigma^2 = I, so exp(-i a/2 sigma) = cos(a/2) I - i sin(a/2) sigma.
  const ComplexMatrix r = ComplexMatrix::identity(rho.dim()) * Complex(std::cos(angle / 2.0)) +
                          sigma * Complex(0.0, -std::sin(angle / 2.0));
  ComplexMatrix out = r * rho.matrix() * r.adjoint();
  out = (out + out.adjoint()) * Complex(0.5);
  return DensityMatrix(std::move(out));
}

DensityMatrix thermal_initial(const SpinSystemParams& params) {
  ComplexMatrix rho = ComplexMatrix::identity(kHilbertDim) * Complex(1.0 / 8.0);
  ComplexMatrix polar = pauli_embed(Axis::z, 1, kNumSpins) + pauli_embed(Axis::z, 2, kNumSpins) +
                        pauli_embed(Axis::x, 3, kNumSpins);
  rho += polar * Complex(params.thermal_p / 2.0);
  return DensityMatrix(std::move(rho));
}

DensityMatrix pps_initial(PpsLabel label, double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw ArgumentError("PPS polarization q must lie in (0, 1], got " + std::to_string(q));
  }
  ComplexMatrix env(4);
  const auto idx = static_cast<std::size_t>(label);
  env(idx, idx) = 1.0;
  const ComplexMatrix spin3 =
      (ComplexMatrix::identity(2) + pauli(Axis::x)) * Complex(0.5);
  ComplexMatrix rho = ComplexMatrix::identity(kHilbertDim) * Complex((1.0 - q) / 8.0);
  rho += kron(env, spin3) * Complex(q);
  return DensityMatrix(std::move(rho));
}

DensityMatrix initial_state(StateLabel label, const SpinSystemParams& params) {
  if (const auto pps = to_pps(label)) {
    return pps_initial(*pps, params.pps_q);
  }
  return thermal_initial(params);
}

}  // namespace fresure
