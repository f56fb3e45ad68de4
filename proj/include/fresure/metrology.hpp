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

#include <cstddef>
#include <span>
#include <vector>

namespace fresure {

struct AllanResult {
  std::vector<std::size_t> m_values;
  std::vector<double> sigma_hz;
  std::size_t series_length = 0;
};

/// Non-overlapping two-sample (Allan) deviation of M-averaged groups:
/// sigma(M)^2 = 1/(2(K-1)) sum_k (ybar_{k+1} - ybar_k)^2, K = floor(len / M).
/// m_values must be strictly increasing, >= 1, and 2 * max(M) <= len.
AllanResult allan_deviation(std::span<const double> measurements,
                            std::span<const std::size_t> m_values);

/// Powers of two 1, 2, 4, ... up to len / 2.
std::vector<std::size_t> octave_m_values(std::size_t series_length);

struct ResolutionLimit {
  double sigma_min_hz = 0.0;
  std::size_t m_at_min = 0;
};

/// Minimum deviation and its group size (ties resolved toward smaller M).
ResolutionLimit resolution_limit(const AllanResult& result);

/// Least-squares slope of log(sigma) against log(M), skipping zero deviations.
double log_log_slope(const AllanResult& result);

}  // namespace fresure
