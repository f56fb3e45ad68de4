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

// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "fresure/kernels.hpp"

namespace fresure::kernels {
namespace avx2 {
namespace {

// Four consecutive samples of one term live in the four lanes:
// z = c * (w^k, w^(k+1), w^(k+2), w^(k+3)), advanced by w^4 per block.
struct LaneState {
  __m256d re;
  __m256d im;
  __m256d step_re;
  __m256d step_im;
};

inline LaneState make_lanes(double cr, double ci, double wr, double wi) {
  alignas(32) double zr[4];
  alignas(32) double zi[4];
  zr[0] = cr;
  zi[0] = ci;
  for (int l = 1; l < 4; ++l) {
    zr[l] = zr[l - 1] * wr - zi[l - 1] * wi;
    zi[l] = zr[l - 1] * wi + zi[l - 1] * wr;
  }
  const double w2r = wr * wr - wi * wi;
  const double w2i = 2.0 * wr * wi;
  const double w4r = w2r * w2r - w2i * w2i;
  const double w4i = 2.0 * w2r * w2i;
  return {_mm256_load_pd(zr), _mm256_load_pd(zi), _mm256_set1_pd(w4r),
          _mm256_set1_pd(w4i)};
}

inline void advance(LaneState& s) {
  const __m256d nr =
      _mm256_fmsub_pd(s.re, s.step_re, _mm256_mul_pd(s.im, s.step_im));
  const __m256d ni =
      _mm256_fmadd_pd(s.re, s.step_im, _mm256_mul_pd(s.im, s.step_re));
  s.re = nr;
  s.im = ni;
}

// Scalar continuation for the n_samples % 4 tail, starting from lane 0.
inline void finish_tail(const LaneState& s, double wr, double wi,
                        double* out_re, double* out_im, std::size_t begin,
                        std::size_t end) {
  alignas(32) double zr[4];
  alignas(32) double zi[4];
  _mm256_store_pd(zr, s.re);
  _mm256_store_pd(zi, s.im);
  double ar = zr[0];
  double ai = zi[0];
  for (std::size_t k = begin; k < end; ++k) {
    out_re[k] += ar;
    out_im[k] += ai;
    const double nr = ar * wr - ai * wi;
    const double ni = ar * wi + ai * wr;
    ar = nr;
    ai = ni;
  }
}

void phasor_accumulate(const double* c_re, const double* c_im,
                       const double* w_re, const double* w_im,
                       std::size_t n_terms, double* out_re, double* out_im,
                       std::size_t n_samples) {
  const std::size_t n_blocks = n_samples / 4;
  const std::size_t tail_begin = n_blocks * 4;

  std::size_t j = 0;
  // Four independent recurrences per pass hide the complex-multiply latency.
  for (; j + 4 <= n_terms; j += 4) {
    LaneState s0 = make_lanes(c_re[j], c_im[j], w_re[j], w_im[j]);
    LaneState s1 = make_lanes(c_re[j + 1], c_im[j + 1], w_re[j + 1], w_im[j + 1]);
    LaneState s2 = make_lanes(c_re[j + 2], c_im[j + 2], w_re[j + 2], w_im[j + 2]);
    LaneState s3 = make_lanes(c_re[j + 3], c_im[j + 3], w_re[j + 3], w_im[j + 3]);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      double* pr = out_re + 4 * b;
      double* pi = out_im + 4 * b;
      __m256d acc_re = _mm256_add_pd(_mm256_add_pd(s0.re, s1.re),
                                     _mm256_add_pd(s2.re, s3.re));
      __m256d acc_im = _mm256_add_pd(_mm256_add_pd(s0.im, s1.im),
                                     _mm256_add_pd(s2.im, s3.im));
      _mm256_storeu_pd(pr, _mm256_add_pd(_mm256_loadu_pd(pr), acc_re));
      _mm256_storeu_pd(pi, _mm256_add_pd(_mm256_loadu_pd(pi), acc_im));
      advance(s0);
      advance(s1);
      advance(s2);
      advance(s3);
    }
    finish_tail(s0, w_re[j], w_im[j], out_re, out_im, tail_begin, n_samples);
    finish_tail(s1, w_re[j + 1], w_im[j + 1], out_re, out_im, tail_begin, n_samples);
    finish_tail(s2, w_re[j + 2], w_im[j + 2], out_re, out_im, tail_begin, n_samples);
    finish_tail(s3, w_re[j + 3], w_im[j + 3], out_re, out_im, tail_begin, n_samples);
  }
  for (; j < n_terms; ++j) {
    LaneState s = make_lanes(c_re[j], c_im[j], w_re[j], w_im[j]);
    for (std::size_t b = 0; b < n_blocks; ++b) {
      double* pr = out_re + 4 * b;
      double* pi = out_im + 4 * b;
      _mm256_storeu_pd(pr, _mm256_add_pd(_mm256_loadu_pd(pr), s.re));
      _mm256_storeu_pd(pi, _mm256_add_pd(_mm256_loadu_pd(pi), s.im));
      advance(s);
    }
    finish_tail(s, w_re[j], w_im[j], out_re, out_im, tail_begin, n_samples);
  }
}

void compensated_add(double* sum, double* comp, const double* x,
                     std::size_t n) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d s = _mm256_loadu_pd(sum + k);
    const __m256d v = _mm256_loadu_pd(x + k);
    const __m256d t = _mm256_add_pd(s, v);
    const __m256d abs_s = _mm256_andnot_pd(sign_mask, s);
    const __m256d abs_v = _mm256_andnot_pd(sign_mask, v);
    const __m256d s_big = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
    const __m256d when_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
    const __m256d corr = _mm256_blendv_pd(when_v, when_s, s_big);
    _mm256_storeu_pd(comp + k, _mm256_add_pd(_mm256_loadu_pd(comp + k), corr));
    _mm256_storeu_pd(sum + k, t);
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
  for (; k + 4 <= n; k += 4) {
    const __m256d r = _mm256_loadu_pd(re + k);
    const __m256d i = _mm256_loadu_pd(im + k);
    const __m256d sq = _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(i, i));
    _mm256_storeu_pd(out + k, _mm256_sqrt_pd(sq));
  }
  for (; k < n; ++k) {
    out[k] = std::sqrt(re[k] * re[k] + im[k] * im[k]);
  }
}

}  // namespace
}  // namespace avx2

const KernelTable& avx2_table_unchecked() {
  static const KernelTable table{"avx2", avx2::phasor_accumulate,
                                 avx2::compensated_add, avx2::magnitude};
  return table;
}

}  // namespace fresure::kernels
