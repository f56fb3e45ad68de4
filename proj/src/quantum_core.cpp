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

#include "fresure/quantum_core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "fresure/error.hpp"

namespace fresure {
namespace {

using EigenMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenMatrix>;
using MutMap = Eigen::Map<EigenMatrix>;

ConstMap as_eigen(const ComplexMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.dim());
  return ConstMap(m.entries().data(), n, n);
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw ArgumentError(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) +
                        " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
  if (!std::has_single_bit(dim)) {
    throw ArgumentError("matrix dimension must be a power of two, got " + std::to_string(dim));
  }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : ComplexMatrix(dim) {
  if (entries.size() != dim * dim) {
    throw ArgumentError("expected " + std::to_string(dim * dim) + " entries, got " +
                        std::to_string(entries.size()));
  }
  entries_ = std::move(entries);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    m(i, i) = values[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      out(c, r) = std::conj((*this)(r, c));
    }
  }
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    t += (*this)(i, i);
  }
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const Complex& z : entries_) {
    s += std::norm(z);
  }
  return std::sqrt(s);
}

bool ComplexMatrix::is_diagonal() const {
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      if (r != c && (*this)(r, c) != Complex(0.0)) {
        return false;
      }
    }
  }
  return true;
}

bool ComplexMatrix::is_hermitian(double rel_tol) const {
  double diff = 0.0;
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      diff += std::norm((*this)(r, c) - std::conj((*this)(c, r)));
    }
  }
  const double norm = frobenius_norm();
  return norm == 0.0 || std::sqrt(diff) < rel_tol * norm;
}

bool ComplexMatrix::is_unitary(double tol) const {
  const ComplexMatrix uu = *this * adjoint();
  return (uu - identity(dim_)).frobenius_norm() < tol;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator+");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i] += rhs.entries_[i];
  }
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs, "operator-");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    entries_[i] -= rhs.entries_[i];
  }
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (Complex& z : entries_) {
    z *= scale;
  }
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs, "operator*");
  ComplexMatrix out(lhs.dim());
  const auto n = static_cast<Eigen::Index>(lhs.dim());
  MutMap(out.entries().data(), n, n).noalias() = as_eigen(lhs) * as_eigen(rhs);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t n = a.dim() * b.dim();
  ComplexMatrix out(n);
  for (std::size_t ar = 0; ar < a.dim(); ++ar) {
    for (std::size_t ac = 0; ac < a.dim(); ++ac) {
      const Complex s = a(ar, ac);
      if (s == Complex(0.0)) {
        continue;
      }
      for (std::size_t br = 0; br < b.dim(); ++br) {
        for (std::size_t bc = 0; bc < b.dim(); ++bc) {
          out(ar * b.dim() + br, ac * b.dim() + bc) = s * b(br, bc);
        }
      }
    }
  }
  return out;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  nqubits_ = std::countr_zero(matrix_.dim());
  if (!matrix_.is_hermitian(1e-12)) {
    throw ValidationError("density matrix is not Hermitian");
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
  const EigenSystem eig = hermitian_eig(matrix_);
  if (eig.values.front() < -1e-10) {
    throw ValidationError("density matrix is not positive semidefinite (min eigenvalue " +
                          std::to_string(eig.values.front()) + ")");
  }
}

double DensityMatrix::purity() const { return trace_product(matrix_, matrix_).real(); }

ComplexMatrix pauli(Axis axis) {
  const Complex i(0.0, 1.0);
  switch (axis) {
    case Axis::x:
      return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0});
    case Axis::y:
      return ComplexMatrix(2, {0.0, -i, i, 0.0});
    case Axis::z:
      return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0});
  }
  throw ArgumentError("unknown axis");
}

ComplexMatrix pauli_embed(Axis axis, int target, int nqubits) {
  if (nqubits < 1 || nqubits > 4) {
    throw ArgumentError("nqubits must be in [1, 4], got " + std::to_string(nqubits));
  }
  if (target < 1 || target > nqubits) {
    throw ArgumentError("target spin " + std::to_string(target) + " out of range 1.." +
                        std::to_string(nqubits));
  }
  ComplexMatrix out = target == 1 ? pauli(axis) : ComplexMatrix::identity(2);
  for (int q = 2; q <= nqubits; ++q) {
    out = kron(out, q == target ? pauli(axis) : ComplexMatrix::identity(2));
  }
  return out;
}

EigenSystem hermitian_eig(const ComplexMatrix& a) {
  if (!a.is_hermitian(1e-12)) {
    throw ValidationError("hermitian_eig: input is not Hermitian");
  }
  // Symmetrize so round-off asymmetry never leaks into the solver.
  const EigenMatrix sym = 0.5 * (as_eigen(a) + as_eigen(a).adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ValidationError("hermitian_eig: eigensolver did not converge");
  }
  EigenSystem out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + solver.eigenvalues().size());
  out.vectors = ComplexMatrix(a.dim());
  const auto n = static_cast<Eigen::Index>(a.dim());
  MutMap(out.vectors.entries().data(), n, n) = solver.eigenvectors();
  return out;
}

ComplexMatrix propagator(const EigenSystem& eig, double t) {
  const std::size_t n = eig.vectors.dim();
  ComplexMatrix scaled = eig.vectors;
  for (std::size_t c = 0; c < n; ++c) {
    const Complex phase = std::polar(1.0, -eig.values[c] * t);
    for (std::size_t r = 0; r < n; ++r) {
      scaled(r, c) *= phase;
    }
  }
  return scaled * eig.vectors.adjoint();
}

DensityMatrix evolve(const DensityMatrix& rho0, const ComplexMatrix& hamiltonian, double t) {
  require_same_dim(rho0.matrix(), hamiltonian, "evolve");
  const ComplexMatrix u = propagator(hermitian_eig(hamiltonian), t);
  ComplexMatrix rho = u * rho0.matrix() * u.adjoint();
  // Restore exact Hermiticity lost to round-off.
  rho = (rho + rho.adjoint()) * Complex(0.5);
  return DensityMatrix(std::move(rho));
}

Complex trace_product(const ComplexMatrix& rho, const ComplexMatrix& op) {
  require_same_dim(rho, op, "trace_product");
  Complex t = 0.0;
  const std::size_t n = rho.dim();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      t += rho(r, c) * op(c, r);
    }
  }
  return t;
}

double expectation(const DensityMatrix& rho, const ComplexMatrix& observable) {
  const Complex v = trace_product(rho.matrix(), observable);
  if (std::abs(v.imag()) >= 1e-10) {
    throw ValidationError("expectation: Tr(rho O) has imaginary part " + std::to_string(v.imag()) +
                          "; observable is not Hermitian");
  }
  return v.real();
}

}  // namespace fresure
