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

#include <cstdlib>
#include <string>

#include "fresure/error.hpp"
#include "fresure/kernels.hpp"

namespace fresure::kernels {

#if defined(FRESURE_HAVE_AVX2)
const KernelTable& avx2_table_unchecked();
#endif
#if defined(FRESURE_HAVE_NEON)
const KernelTable& neon_table_unchecked();
#endif

const KernelTable* avx2_table() {
#if defined(FRESURE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() {
#if defined(FRESURE_HAVE_NEON)
  // Advanced SIMD is mandatory on AArch64.
  return &neon_table_unchecked();
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("FRESURE_SIMD");
  const std::string want = env != nullptr ? env : "auto";
  if (want == "scalar") {
    return scalar_table();
  }
  if (want == "avx2" || want == "neon") {
    const KernelTable* t = want == "avx2" ? avx2_table() : neon_table();
    if (t == nullptr) {
      throw ArgumentError("FRESURE_SIMD=" + want +
                          " requested but not available on this CPU/build");
    }
    return *t;
  }
  if (want != "auto") {
    throw ArgumentError("FRESURE_SIMD must be auto, scalar, avx2 or neon; got " +
                        want);
  }
  if (const KernelTable* t = avx2_table()) {
    return *t;
  }
  if (const KernelTable* t = neon_table()) {
    return *t;
  }
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace fresure::kernels
