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

#include <cmath>

#include "fresure/kernels.hpp"

namespace fresure::kernels {
namespace {

void phasor_accumulate_scalar(const double* c_re, const double* c_im,
                              const double* w_re, const double* w_im,
                              std::size_t n_terms, double* out_re,
                              double* out_im, std::size_t n_samples) {
  for (std::size_t j = 0; j < n_terms; ++j) {
    double zr = c_re[j];
    double zi = c_im[j];
    const double wr = w_re[j];
    const double wi = w_im[j];
    for (std::size_t k = 0; k < n_samples; ++k) {
      out_re[k] += zr;
      out_im[k] += zi;
      const double nr = zr * wr - zi * wi;
      const double ni = zr * wi + zi * wr;
      zr = nr;
      zi = ni;
    }
  }
}

void compensated_add_scalar(double* sum, double* comp, const double* x,
                            std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    const double s = sum[k];
    const double t = s + x[k];
    if (std::abs(s) >= std::abs(x[k])) {
      comp[k] += (s - t) + x[k];
    } else {
      comp[k] += (x[k] - t) + s;
    }
    sum[k] = t;
  }
}

void magnitude_scalar(const double* re, const double* im, double* out,
                      std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = std::sqrt(re[k] * re[k] + im[k] * im[k]);
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", phasor_accumulate_scalar,
                                 compensated_add_scalar, magnitude_scalar};
  return table;
}

}  // namespace fresure::kernels
