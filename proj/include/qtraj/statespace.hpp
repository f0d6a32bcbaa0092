// Copyright 2026 The qtraj Authors
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
#include <vector>

#include <Eigen/Dense>

namespace qtraj {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Normalized pure state over a finite basis.
///
/// Construction always normalizes; zero, empty or non-finite input is rejected.
class StateVector {
 public:
  explicit StateVector(CVector amplitudes);
  StateVector(std::initializer_list<Complex> amplitudes);

  static StateVector basis(Index dim, Index k);

  Index dim() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](Index i) const { return amplitudes_(i); }

 private:
  CVector amplitudes_;
};

/// Square complex matrix acting on StateVectors of the same dimension.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(CMatrix entries);

  static OperatorMatrix identity(Index dim);
  static OperatorMatrix zero(Index dim);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(Index r, Index c) const { return entries_(r, c); }

  OperatorMatrix adjoint() const { return OperatorMatrix(entries_.adjoint()); }
  bool is_hermitian(double tol = 1e-10) const;

 private:
  CMatrix entries_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix.
///
/// The checked constructor enforces hermiticity (1e-10 max element deviation),
/// trace (1e-10) and minimum eigenvalue (>= -1e-8).
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix entries);

  /// Skips the eigenvalue check; for values that are valid by construction
  /// (projectors, convex mixtures of projectors).
  static DensityMatrix assume_valid(CMatrix entries);

  Index dim() const { return entries_.rows(); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(Index r, Index c) const { return entries_(r, c); }

 private:
  struct Unchecked {};
  DensityMatrix(CMatrix entries, Unchecked) : entries_(std::move(entries)) {}
  CMatrix entries_;
};

/// <psi|A|psi>.
Complex expectation(const OperatorMatrix& op, const StateVector& psi);

/// |psi><psi|.
DensityMatrix projector(const StateVector& psi);

/// Half the sum of absolute eigenvalues of (a - b).
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Trace distance between |a><a| and |b><b| for unit vectors, computed without
/// forming the projectors. Accurate down to rounding for nearly equal states.
double projector_distance(const CVector& a, const CVector& b);
double projector_distance(const StateVector& a, const StateVector& b);

/// Eigenvalues of a Hermitian matrix in ascending order. Only the lower
/// triangle is read.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

double min_eigenvalue(const DensityMatrix& rho);

/// e^A by scaling and squaring with a truncated Taylor series.
CMatrix matrix_exp(const CMatrix& a);
OperatorMatrix matrix_exp(const OperatorMatrix& a);

/// (m + m^dagger) / 2 with the trace scaled to one.
CMatrix symmetrize_and_normalize(const CMatrix& m);

}  // namespace qtraj
