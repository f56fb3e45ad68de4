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
#include <string_view>

// Data-parallel inner loops of the simulator. Each kernel has a scalar
// reference implementation and optional ISA-specific variants; one table is
// chosen at first use from CPU capabilities and the FRESURE_SIMD variable
// (`auto`, `scalar`, `avx2`, `neon`).
namespace fresure::kernels {

// out[k] += sum_j c_j * w_j^k for k in [0, n_samples).
// Terms are given as split real/imaginary arrays of length n_terms.
using PhasorAccumulateFn = void (*)(const double* c_re, const double* c_im,
                                    const double* w_re, const double* w_im,
                                    std::size_t n_terms, double* out_re,
                                    double* out_im, std::size_t n_samples);

// Per-element Neumaier summation: (sum, comp) += x.
// Implementations must be bit-identical to the scalar reference.
using CompensatedAddFn = void (*)(double* sum, double* comp, const double* x,
                                  std::size_t n);

// out[k] = sqrt(re[k]^2 + im[k]^2)
using MagnitudeFn = void (*)(const double* re, const double* im, double* out,
                             std::size_t n);

struct KernelTable {
  std::string_view name;
  PhasorAccumulateFn phasor_accumulate;
  CompensatedAddFn compensated_add;
  MagnitudeFn magnitude;
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// Table selected for this process. Stable after the first call.
const KernelTable& active();

}  // namespace fresure::kernels
