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

// AArch64 variant; built only when the target processor is aarch64.
#include <arm_neon.h>

#include <cmath>

#include "fresure/kernels.hpp"

namespace fresure::kernels {
namespace neon {
namespace {

// Two consecutive samples per lane pair: z = c * (w^k, w^(k+1)), stepped by w^2.
void phasor_accumulate(const double* c_re, const double* c_im,
                       const double* w_re, const double* w_im,
                       std::size_t n_terms, double* out_re, double* out_im,
                       std::size_t n_samples) {
  const std::size_t n_blocks = n_samples / 2;
  for (std::size_t j = 0; j < n_terms; ++j) {
    const double wr = w_re[j];
    const double wi = w_im[j];
    const double z1r = c_re[j] * wr - c_im[j] * wi;
    const double z1i = c_re[j] * wi + c_im[j] * wr;
    const double zr_init[2] = {c_re[j], z1r};
    const double zi_init[2] = {c_im[j], z1i};
    float64x2_t zr = vld1q_f64(zr_init);
    float64x2_t zi = vld1q_f64(zi_init);
    const float64x2_t sr = vdupq_n_f64(wr * wr - wi * wi);
    const float64x2_t si = vdupq_n_f64(2.0 * wr * wi);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      double* pr = out_re + 2 * b;
      double* pi = out_im + 2 * b;
      vst1q_f64(pr, vaddq_f64(vld1q_f64(pr), zr));
      vst1q_f64(pi, vaddq_f64(vld1q_f64(pi), zi));
      const float64x2_t nr = vfmsq_f64(vmulq_f64(zr, sr), zi, si);
      const float64x2_t ni = vfmaq_f64(vmulq_f64(zr, si), zi, sr);
      zr = nr;
      zi = ni;
    }
    if (n_samples % 2 != 0) {
      out_re[n_samples - 1] += vgetq_lane_f64(zr, 0);
      out_im[n_samples - 1] += vgetq_lane_f64(zi, 0);
    }
  }
}

void compensated_add(double* sum, double* comp, const double* x,
                     std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t s = vld1q_f64(sum + k);
    const float64x2_t v = vld1q_f64(x + k);
    const float64x2_t t = vaddq_f64(s, v);
    const uint64x2_t s_big = vcgeq_f64(vabsq_f64(s), vabsq_f64(v));
    const float64x2_t when_s = vaddq_f64(vsubq_f64(s, t), v);
    const float64x2_t when_v = vaddq_f64(vsubq_f64(v, t), s);
    const float64x2_t corr = vbslq_f64(s_big, when_s, when_v);
    vst1q_f64(comp + k, vaddq_f64(vld1q_f64(comp + k), corr));
    vst1q_f64(sum + k, t);
  }
  for (; k < n; ++k) {
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

void magnitude(const double* re, const double* im, double* out,
               std::size_t n) {
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t r = vld1q_f64(re + k);
    const float64x2_t i = vld1q_f64(im + k);
    vst1q_f64(out + k, vsqrtq_f64(vaddq_f64(vmulq_f64(r, r), vmulq_f64(i, i))));
  }
  for (; k < n; ++k) {
    out[k] = std::sqrt(re[k] * re[k] + im[k] * im[k]);
  }
}

}  // namespace
}  // namespace neon

const KernelTable& neon_table_unchecked() {
  static const KernelTable table{"neon", neon::phasor_accumulate,
                                 neon::compensated_add, neon::magnitude};
  return table;
}

}  // namespace fresure::kernels
