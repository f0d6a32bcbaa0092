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

#include "qtraj/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {


double max_hermitian_deviation(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double one_norm(const CMatrix& m) {
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

StateVector::StateVector(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    throw InputError("state vector must have dim >= 1");
  }
  if (!amplitudes_.allFinite()) {
    throw NumericalError("state vector has non-finite amplitudes");
  }
  const double norm = amplitudes_.norm();
  if (norm == 0.0) {
    throw InputError("state vector has zero norm");
  }
  amplitudes_ /= norm;
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector(CVector(Eigen::Map<const CVector>(amplitudes.begin(), static_cast<Index>(amplitudes.size())))) {}

StateVector StateVector::basis(Index dim, Index k) {
  if (dim < 1 || k < 0 || k >= dim) {
    throw InputError("basis index " + std::to_string(k) + " out of range for dim " + std::to_string(dim));
  }
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return StateVector(std::move(v));
}

OperatorMatrix::OperatorMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw DimensionError("operator must be square, got " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()));
  }
  if (entries_.rows() == 0) {
    throw InputError("operator must have dim >= 1");
  }
}

OperatorMatrix OperatorMatrix::identity(Index dim) { return OperatorMatrix(CMatrix::Identity(dim, dim)); }

OperatorMatrix OperatorMatrix::zero(Index dim) { return OperatorMatrix(CMatrix::Zero(dim, dim)); }

bool OperatorMatrix::is_hermitian(double tol) const { return max_hermitian_deviation(entries_) <= tol; }

DensityMatrix::DensityMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("density matrix must be square and non-empty");
  }
  if (!entries_.allFinite()) {
    throw NumericalError("density matrix has non-finite entries");
  }
  if (max_hermitian_deviation(entries_) > 1e-10) {
    throw InputError("density matrix is not Hermitian");
  }
  if (std::abs(entries_.trace() - Complex(1.0)) > 1e-10) {
    throw InputError("density matrix trace differs from 1");
  }
  if (hermitian_eigenvalues(entries_).front() < -1e-8) {
    throw InputError("density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::assume_valid(CMatrix entries) { return DensityMatrix(std::move(entries), Unchecked{}); }

Complex expectation(const OperatorMatrix& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) {
    throw DimensionError("expectation: operator dim " + std::to_string(op.dim()) + " vs state dim " +
                         std::to_string(psi.dim()));
  }
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes());
}

DensityMatrix projector(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix::assume_valid(a * a.adjoint());
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Hermitian eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double min_eigenvalue(const DensityMatrix& rho) { return hermitian_eigenvalues(rho.matrix()).front(); }

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("trace_distance: dims " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  const CMatrix diff = a.matrix() - b.matrix();
  // The eigensolver reads only one triangle; average to use both.
  const CMatrix herm = 0.5 * (diff + diff.adjoint());
  double sum = 0.0;
  for (double ev : hermitian_eigenvalues(herm)) {
    sum += std::abs(ev);
  }
  return std::clamp(0.5 * sum, 0.0, 1.0);
}

double projector_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("projector_distance: dimension mismatch");
  }
  const Complex overlap = b.dot(a);  // <b|a>
  const double mag = std::abs(overlap);
  if (mag == 0.0) {
    return 1.0;
  }
  // Align the global phase of b with a; then 1 - |<a|b>|^2 = n2 (1 - n2/4).
  const double n2 = (a - b * (overlap / mag)).squaredNorm();
  return std::sqrt(std::clamp(n2 * (1.0 - 0.25 * n2), 0.0, 1.0));
}

double projector_distance(const StateVector& a, const StateVector& b) {
  return projector_distance(a.amplitudes(), b.amplitudes());
}

CMatrix matrix_exp(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("matrix_exp: matrix must be square");
  }
  if (!a.allFinite()) {
    throw InputError("matrix_exp: non-finite entries");
  }
  const Index n = a.rows();
  const double norm = n == 0 ? 0.0 : one_norm(a);
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const CMatrix scaled = a / std::ldexp(1.0, squarings);

  CMatrix result = CMatrix::Identity(n, n);
  CMatrix term = CMatrix::Identity(n, n);
  for (int k = 1; k <= 60; ++k) {
    term = (term * scaled) / static_cast<double>(k);
    result += term;
    if (one_norm(term) <= 1e-18 * one_norm(result)) {
      break;
    }
  }
  for (int s = 0; s < squarings; ++s) {
    result = result * result;
  }
  return result;
}

OperatorMatrix matrix_exp(const OperatorMatrix& a) { return OperatorMatrix(matrix_exp(a.matrix())); }

CMatrix symmetrize_and_normalize(const CMatrix& m) {
  CMatrix h = 0.5 * (m + m.adjoint());
  const double tr = h.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) {
    throw NumericalError("cannot normalize matrix with non-positive trace");
  }
  return h / tr;
}

}  // namespace qtraj
