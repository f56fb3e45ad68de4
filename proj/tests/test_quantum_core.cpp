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
#include <numbers>

#include "fresure/error.hpp"
#include "fresure/quantum_core.hpp"
#include "test_support.hpp"

using namespace fresure;
using fresure::test::distance;
using fresure::test::Stream;

TEST_CASE("matrix dimension must be a power of two") {
  CHECK_THROWS_AS(ComplexMatrix(3), ArgumentError);
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), ArgumentError);
  CHECK(ComplexMatrix(8).dim() == 8);
}

TEST_CASE("pauli_embed follows the F1-most-significant ordering") {
  const ComplexMatrix z12 = pauli_embed(Axis::z, 1, 2);
  const double expected[] = {1.0, 1.0, -1.0, -1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(z12(i, j) == Complex(i == j ? expected[i] : 0.0));
    }
  }

  const ComplexMatrix x22 = pauli_embed(Axis::x, 2, 2);
  ComplexMatrix want(4);
  want(0, 1) = want(1, 0) = want(2, 3) = want(3, 2) = 1.0;
  CHECK(x22 == want);

  const ComplexMatrix z33 = pauli_embed(Axis::z, 3, 3);
  CHECK(z33 * z33 == ComplexMatrix::identity(8));

  CHECK_THROWS_AS(pauli_embed(Axis::x, 0, 3), ArgumentError);
  CHECK_THROWS_AS(pauli_embed(Axis::x, 4, 3), ArgumentError);
}

TEST_CASE("embedded Paulis anticommute on one spin and commute across spins") {
  const Axis axes[] = {Axis::x, Axis::y, Axis::z};
  for (int i = 1; i <= 3; ++i) {
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        const ComplexMatrix sa = pauli_embed(axes[a], i, 3);
        const ComplexMatrix sb = pauli_embed(axes[b], i, 3);
        CHECK((sa * sb + sb * sa).frobenius_norm() == 0.0);
      }
      for (int k = 1; k <= 3; ++k) {
        if (k == i) continue;
        for (int b = 0; b < 3; ++b) {
          CHECK(commutator(pauli_embed(axes[a], i, 3), pauli_embed(axes[b], k, 3))
                    .frobenius_norm() == 0.0);
        }
      }
    }
  }
}

TEST_CASE("hermitian_eig on known spectra") {
  const double d[] = {3.0, 1.0, 2.0, 5.0};
  const EigenSystem e = hermitian_eig(ComplexMatrix::diagonal(d));
  CHECK_THAT(e.values[0], Catch::Matchers::WithinAbs(1.0, 1e-14));
  CHECK_THAT(e.values[1], Catch::Matchers::WithinAbs(2.0, 1e-14));
  CHECK_THAT(e.values[2], Catch::Matchers::WithinAbs(3.0, 1e-14));
  CHECK_THAT(e.values[3], Catch::Matchers::WithinAbs(5.0, 1e-14));

  const EigenSystem x = hermitian_eig(pauli(Axis::x));
  CHECK_THAT(x.values[0], Catch::Matchers::WithinAbs(-1.0, 1e-15));
  CHECK_THAT(x.values[1], Catch::Matchers::WithinAbs(1.0, 1e-15));
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
  Stream s(11);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix h = test::random_hermitian(8, s);
    const EigenSystem e = hermitian_eig(h);
    const ComplexMatrix rebuilt =
        e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
    CHECK(distance(rebuilt, h) < 1e-11);
    CHECK(distance(e.vectors * e.vectors.adjoint(), ComplexMatrix::identity(8)) < 1e-11);
    for (std::size_t i = 1; i < e.values.size(); ++i) {
      CHECK(e.values[i - 1] <= e.values[i]);
    }
  }
}

TEST_CASE("propagator is unitary") {
  Stream s(5);
  const ComplexMatrix h = test::random_hermitian(8, s);
  const ComplexMatrix u = propagator(hermitian_eig(h), 0.37);
  CHECK(u.is_unitary());
}

TEST_CASE("evolve: identity at t=0 and Larmor precession") {
  Stream s(3);
  const DensityMatrix rho = test::random_density(8, s);
  const ComplexMatrix h = test::random_hermitian(8, s);
  CHECK(distance(evolve(rho, h, 0.0).matrix(), rho.matrix()) < 1e-14);

  const double omega = 2.0 * std::numbers::pi * 17.0;
  const DensityMatrix plus_x((ComplexMatrix::identity(2) + pauli(Axis::x)) * Complex(0.5));
  const ComplexMatrix hz = pauli(Axis::z) * Complex(omega / 2.0);
  for (double t : {0.0, 0.003, 0.0117, 0.25}) {
    CHECK_THAT(expectation(evolve(plus_x, hz, t), pauli(Axis::x)),
               Catch::Matchers::WithinAbs(std::cos(omega * t), 1e-12));
  }
}

TEST_CASE("evolve preserves trace, Hermiticity and spectrum; times compose") {
  Stream s(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityMatrix rho = test::random_density(8, s);
    const ComplexMatrix h = test::random_hermitian(8, s) * Complex(100.0);
    const double t1 = s.uniform(), t2 = s.uniform();
    const DensityMatrix out = evolve(rho, h, t1);
    CHECK(std::abs(out.matrix().trace() - 1.0) < 1e-11);
    CHECK(out.matrix().is_hermitian());
    const auto before = hermitian_eig(rho.matrix()).values;
    const auto after = hermitian_eig(out.matrix()).values;
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK_THAT(after[i], Catch::Matchers::WithinAbs(before[i], 1e-12));
    }
    const DensityMatrix two_step = evolve(evolve(rho, h, t1), h, t2);
    CHECK(distance(two_step.matrix(), evolve(rho, h, t1 + t2).matrix()) < 1e-10);
  }
}

TEST_CASE("expectation values") {
  const DensityMatrix plus_x((ComplexMatrix::identity(2) + pauli(Axis::x)) * Complex(0.5));
  CHECK_THAT(expectation(plus_x, pauli(Axis::x)), Catch::Matchers::WithinAbs(1.0, 1e-15));

  const DensityMatrix mixed(ComplexMatrix::identity(8) * Complex(1.0 / 8.0));
  CHECK(expectation(mixed, pauli_embed(Axis::x, 3, 3)) == 0.0);
  CHECK_THAT(mixed.purity(), Catch::Matchers::WithinAbs(1.0 / 8.0, 1e-15));

  const DensityMatrix up_z((ComplexMatrix::identity(2) + pauli(Axis::z)) * Complex(0.5));
  CHECK_THROWS_AS(expectation(up_z, pauli(Axis::y) * pauli(Axis::x)), ValidationError);
}

TEST_CASE("DensityMatrix rejects invalid operators") {
  ComplexMatrix not_hermitian = ComplexMatrix::identity(2) * Complex(0.5);
  not_hermitian(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix(not_hermitian), ValidationError);
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(2)), ValidationError);
  const double negative[] = {1.5, -0.5};
  CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal(negative)), ValidationError);
}

TEST_CASE("kron places the left factor on the high bits") {
  const ComplexMatrix k = kron(pauli(Axis::z), ComplexMatrix::identity(2));
  CHECK(k == pauli_embed(Axis::z, 1, 2));
  CHECK(kron(ComplexMatrix::identity(2), pauli(Axis::x)) == pauli_embed(Axis::x, 2, 2));
}
