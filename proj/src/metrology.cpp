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

#include "fresure/metrology.hpp"

#include <cmath>
#include <string>

#include "fresure/error.hpp"

namespace fresure {

AllanResult allan_deviation(std::span<const double> measurements,
                            std::span<const std::size_t> m_values) {
  if (m_values.empty()) {
    throw ArgumentError("allan_deviation: no averaging sizes given");
  }
  for (std::size_t i = 0; i < m_values.size(); ++i) {
    if (m_values[i] == 0) {
      throw ArgumentError("allan_deviation: M must be >= 1");
    }
    if (i > 0 && m_values[i] <= m_values[i - 1]) {
      throw ArgumentError("allan_deviation: M values must be strictly increasing");
    }
  }
  const std::size_t len = measurements.size();
  if (len < 2 * m_values.back()) {
    throw ArgumentError("allan_deviation: series of length " + std::to_string(len) +
                        " too short for M = " + std::to_string(m_values.back()));
  }

  AllanResult result;
  result.series_length = len;
  result.m_values.assign(m_values.begin(), m_values.end());
  for (std::size_t m : m_values) {
    const std::size_t groups = len / m;
    std::vector<double> means(groups, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        s += measurements[g * m + i];
      }
      means[g] = s / static_cast<double>(m);
    }
    double acc = 0.0;
    for (std::size_t g = 0; g + 1 < groups; ++g) {
      const double d = means[g + 1] - means[g];
      acc += d * d;
    }
    result.sigma_hz.push_back(std::sqrt(acc / (2.0 * static_cast<double>(groups - 1))));
  }
  return result;
}

std::vector<std::size_t> octave_m_values(std::size_t series_length) {
  std::vector<std::size_t> out;
  for (std::size_t m = 1; 2 * m <= series_length; m *= 2) {
    out.push_back(m);
  }
  return out;
}

ResolutionLimit resolution_limit(const AllanResult& result) {
  if (result.sigma_hz.empty()) {
    throw ArgumentError("resolution_limit: empty Allan result");
  }
  ResolutionLimit best{result.sigma_hz.front(), result.m_values.front()};
  for (std::size_t i = 1; i < result.sigma_hz.size(); ++i) {
    if (result.sigma_hz[i] < best.sigma_min_hz) {
      best = {result.sigma_hz[i], result.m_values[i]};
    }
  }
  return best;
}

double log_log_slope(const AllanResult& result) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  double n = 0.0;
  for (std::size_t i = 0; i < result.sigma_hz.size(); ++i) {
    if (!(result.sigma_hz[i] > 0.0)) {
      continue;
    }
    const double x = std::log(static_cast<double>(result.m_values[i]));
    const double y = std::log(result.sigma_hz[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1.0;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2.0 || denom == 0.0) {
    throw ArgumentError("log_log_slope: need at least two nonzero deviations");
  }
  return (n * sxy - sx * sy) / denom;
}

}  // namespace fresure
