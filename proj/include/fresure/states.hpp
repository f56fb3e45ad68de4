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
#include <optional>
#include <string>
#include <string_view>

#include "fresure/model.hpp"
#include "fresure/quantum_core.hpp"

namespace fresure {

/// Environment basis state of (F1, F2): A=|00>, B=|01>, C=|10>, D=|11>.
enum class PpsLabel { A = 0, B = 1, C = 2, D = 3 };

inline constexpr std::array<PpsLabel, 4> kPpsLabels{PpsLabel::A, PpsLabel::B, PpsLabel::C,
                                                   PpsLabel::D};

/// Initial state of an FID: the rotated thermal state or one of the four PPSs.
enum class StateLabel { thermal, pps_a, pps_b, pps_c, pps_d };

inline constexpr std::array<StateLabel, 5> kAllStates{StateLabel::thermal, StateLabel::pps_a,
                                                     StateLabel::pps_b, StateLabel::pps_c,
                                                     StateLabel::pps_d};

StateLabel to_state(PpsLabel label);
std::optional<PpsLabel> to_pps(StateLabel label);

/// "thermal", "ppsA" ... "ppsD"
std::string to_string(StateLabel label);
std::optional<StateLabel> parse_state(std::string_view text);

/// I/8 + (p/2) sum_i sigma_iz. Throws ValidationError if the result is not PSD.
DensityMatrix thermal_equilibrium(const SpinSystemParams& params);

/// R rho R^dag with R = exp(-i angle/2 sigma_axis) on spin `target`.
DensityMatrix rotate(const DensityMatrix& rho, int target, Axis axis, double angle);

/// Thermal state after a pi/2 y-pulse on F3: I/8 + (p/2)(s1z + s2z + s3x).
DensityMatrix thermal_initial(const SpinSystemParams& params);

/// (1-q)/8 I + q |ab><ab| (x) (I2 + s3x)/2. Throws ArgumentError for q outside (0, 1].
DensityMatrix pps_initial(PpsLabel label, double q);

/// Thermal initial state (uses p) or PPS (uses q).
DensityMatrix initial_state(StateLabel label, const SpinSystemParams& params);

}  // namespace fresure
