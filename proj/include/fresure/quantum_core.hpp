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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fresure {

using Complex = std::complex<double>;

enum class Axis { x, y, z };

/// Dense square complex operator on N qubits (dim = 2^N), row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix. Throws ArgumentError unless dim is a power of two.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t row, std::size_t col) { return entries_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return entries_; }
  std::span<Complex> entries() { return entries_; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  double frobenius_norm() const;
  bool is_diagonal() const;

  /// ||A - A^dag||_F < rel_tol * ||A||_F (zero matrix counts as Hermitian).
  bool is_hermitian(double rel_tol = 1e-12) const;
  /// ||U U^dag - I||_F < tol
  bool is_unitary(double tol = 1e-10) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex s) { return lhs *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix rhs) { return rhs *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> entries_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12 rel), |Tr - 1| < 1e-12 and eigenvalues >= -1e-10;
  /// throws ValidationError otherwise.
  explicit DensityMatrix(ComplexMatrix matrix);

  const ComplexMatrix& matrix() const { return matrix_; }
  std::size_t dim() const { return matrix_.dim(); }
  int nqubits() const { return nqubits_; }
  double purity() const;

 private:
  ComplexMatrix matrix_;
  int nqubits_ = 0;
};

/// Single-qubit Pauli matrix.
ComplexMatrix pauli(Axis axis);

/// I (x) ... (x) sigma_axis (x) ... (x) I with sigma at `target` (1-based,
/// qubit 1 is the most significant bit of the basis index).
/// Requires 1 <= target <= nqubits <= 4.
ComplexMatrix pauli_embed(Axis axis, int target, int nqubits);

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

/// Throws ValidationError for non-Hermitian input.
EigenSystem hermitian_eig(const ComplexMatrix& a);

/// exp(-i t H) from a precomputed eigensystem of H.
ComplexMatrix propagator(const EigenSystem& eig, double t);

/// U rho U^dag with U = exp(-i t H); H in rad/s, t in seconds.
DensityMatrix evolve(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian, double t);

/// Tr(rho O) for an arbitrary (not necessarily Hermitian) operator.
Complex trace_product(const ComplexMatrix& rho, const ComplexMatrix& op);

/// Re Tr(rho O) for Hermitian O; throws ValidationError if |Im| >= 1e-10.
double expectation(const DensityMatrix& rho, const ComplexMatrix& observable);

}  // namespace fresure
