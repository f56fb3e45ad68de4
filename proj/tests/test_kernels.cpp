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

#include <catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "fresure/kernels.hpp"
#include "test_support.hpp"

using namespace fresure;
namespace k = fresure::kernels;

namespace {

std::vector<const k::KernelTable*> simd_tables() {
  std::vector<const k::KernelTable*> out;
  if (const auto* t = k::avx2_table()) out.push_back(t);
  if (const auto* t = k::neon_table()) out.push_back(t);
  return out;
}

struct Terms {
  std::vector<double> c_re, c_im, w_re, w_im;
};

Terms random_terms(std::size_t n, test::Stream& s) {
  Terms t;
  for (std::size_t j = 0; j < n; ++j) {
    const double amp = s.uniform();
    const double phase = 6.283185307179586 * s.uniform();
    t.c_re.push_back(amp * std::cos(phase));
    t.c_im.push_back(amp * std::sin(phase));
    const double step = 2.0 * s.symmetric();
    t.w_re.push_back(std::cos(step));
    t.w_im.push_back(std::sin(step));
  }
  return t;
}

}  // namespace

TEST_CASE("active table is one of the known variants") {
  const auto& a = k::active();
  const bool known = &a == &k::scalar_table() || &a == k::avx2_table() || &a == k::neon_table();
  CHECK(known);
  CHECK(k::scalar_table().name == "scalar");
}

TEST_CASE("scalar phasor accumulation matches direct evaluation") {
  test::Stream s(1);
  for (std::size_t n_terms : {1u, 3u, 8u, 13u}) {
    const Terms t = random_terms(n_terms, s);
    const std::size_t n = 4000;
    std::vector<double> re(n, 0.0), im(n, 0.0);
    k::scalar_table().phasor_accumulate(t.c_re.data(), t.c_im.data(), t.w_re.data(),
                                        t.w_im.data(), n_terms, re.data(), im.data(), n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> want = 0.0;
      for (std::size_t j = 0; j < n_terms; ++j) {
        const double angle = std::arg(std::complex<double>(t.w_re[j], t.w_im[j]));
        want += std::complex<double>(t.c_re[j], t.c_im[j]) *
                std::polar(1.0, angle * static_cast<double>(i));
      }
      worst = std::max(worst, std::abs(std::complex<double>(re[i], im[i]) - want));
    }
    CHECK(worst < 1e-11 * static_cast<double>(n_terms));
  }
}

TEST_CASE("SIMD phasor accumulation agrees with the scalar reference") {
  test::Stream s(2);
  for (const auto* table : simd_tables()) {
    INFO(table->name);
    for (std::size_t n_terms : {1u, 2u, 3u, 4u, 5u, 9u, 16u}) {
      for (std::size_t n : {1u, 2u, 3u, 7u, 64u, 4001u}) {
        const Terms t = random_terms(n_terms, s);
        std::vector<double> re0(n, 0.5), im0(n, -0.25), re1 = re0, im1 = im0;
        k::scalar_table().phasor_accumulate(t.c_re.data(), t.c_im.data(), t.w_re.data(),
                                            t.w_im.data(), n_terms, re0.data(), im0.data(), n);
        table->phasor_accumulate(t.c_re.data(), t.c_im.data(), t.w_re.data(), t.w_im.data(),
                                 n_terms, re1.data(), im1.data(), n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          worst = std::max(worst, std::hypot(re0[i] - re1[i], im0[i] - im1[i]));
        }
        CHECK(worst < 1e-11 * static_cast<double>(n_terms));
      }
    }
  }
}

TEST_CASE("SIMD compensated add and magnitude are bit-identical") {
  test::Stream s(3);
  for (const auto* table : simd_tables()) {
    INFO(table->name);
    for (std::size_t n : {1u, 3u, 4u, 17u, 1000u}) {
      std::vector<double> sum0(n, 0.0), comp0(n, 0.0);
      for (int round = 0; round < 50; ++round) {
        std::vector<double> x(n);
        for (double& v : x) v = std::ldexp(s.symmetric(), static_cast<int>(40 * s.uniform()) - 20);
        std::vector<double> sum1 = sum0, comp1 = comp0;
        k::scalar_table().compensated_add(sum0.data(), comp0.data(), x.data(), n);
        table->compensated_add(sum1.data(), comp1.data(), x.data(), n);
        REQUIRE(std::memcmp(sum0.data(), sum1.data(), n * sizeof(double)) == 0);
        REQUIRE(std::memcmp(comp0.data(), comp1.data(), n * sizeof(double)) == 0);
      }
      std::vector<double> re(n), im(n), m0(n), m1(n);
      for (std::size_t i = 0; i < n; ++i) {
        re[i] = s.symmetric() * 1e3;
        im[i] = s.symmetric() * 1e-3;
      }
      k::scalar_table().magnitude(re.data(), im.data(), m0.data(), n);
      table->magnitude(re.data(), im.data(), m1.data(), n);
      CHECK(std::memcmp(m0.data(), m1.data(), n * sizeof(double)) == 0);
    }
  }
}

TEST_CASE("compensated add recovers cancelled low-order bits") {
  std::vector<double> sum{0.0}, comp{0.0};
  const double big = 1e16, small = 1.0;
  for (double v : {big, small, -big}) {
    k::scalar_table().compensated_add(sum.data(), comp.data(), &v, 1);
  }
  CHECK(sum[0] + comp[0] == 1.0);
}
