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

#include "qtraj/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

LindbladModel::LindbladModel(OperatorMatrix hamiltonian, std::vector<OperatorMatrix> lindblad_ops)
    : hamiltonian_(std::move(hamiltonian)), lindblad_ops_(std::move(lindblad_ops)) {
  if (!hamiltonian_.is_hermitian(1e-10)) {
    throw InputError("Hamiltonian is not Hermitian");
  }
  for (std::size_t k = 0; k < lindblad_ops_.size(); ++k) {
    if (lindblad_ops_[k].dim() != hamiltonian_.dim()) {
      throw DimensionError("Lindblad operator " + std::to_string(k) + " has dim " +
                           std::to_string(lindblad_ops_[k].dim()) + ", Hamiltonian has dim " +
                           std::to_string(hamiltonian_.dim()));
    }
  }
}

RepresentationTransform::RepresentationTransform(CMatrix mixing, CVector shifts)
    : mixing_(std::move(mixing)), shifts_(std::move(shifts)) {
  if (mixing_.rows() != mixing_.cols()) {
    throw DimensionError("mixing matrix must be square");
  }
  if (mixing_.rows() != shifts_.size()) {
    throw DimensionError("mixing is " + std::to_string(mixing_.rows()) + "x" + std::to_string(mixing_.cols()) +
                         " but there are " + std::to_string(shifts_.size()) + " shifts");
  }
  if (!mixing_.allFinite() || !shifts_.allFinite()) {
    throw InputError("transform has non-finite entries");
  }
  const Index k = mixing_.rows();
  if (k > 0 && ((mixing_ * mixing_.adjoint()) - CMatrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InputError("mixing matrix is not unitary");
  }
}

RepresentationTransform RepresentationTransform::identity(std::size_t channels) {
  const auto k = static_cast<Index>(channels);
  return RepresentationTransform(CMatrix::Identity(k, k), CVector::Zero(k));
}

DrivePeriod::DrivePeriod(double period_, double phase_offset_) : period(period_), phase_offset(phase_offset_) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw InputError("drive period must be positive");
  }
  if (!(phase_offset >= 0.0 && phase_offset < period)) {
    throw InputError("phase offset must lie in [0, period)");
  }
}

LindbladModel apply_transform(const LindbladModel& model, const RepresentationTransform& transform) {
  if (transform.channels() != model.channels()) {
    throw DimensionError("transform acts on " + std::to_string(transform.channels()) + " channels, model has " +
                         std::to_string(model.channels()));
  }
  const Index dim = model.dim();
  const auto& ops = model.lindblad_ops();
  const CMatrix& u = transform.mixing();
  const CMatrix identity = CMatrix::Identity(dim, dim);

  CMatrix h = model.hamiltonian().matrix();
  std::vector<OperatorMatrix> new_ops;
  new_ops.reserve(ops.size());
  for (std::size_t j = 0; j < ops.size(); ++j) {
    CMatrix mixed = CMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      mixed += u(static_cast<Index>(j), static_cast<Index>(k)) * ops[k].matrix();
    }
    const Complex c = transform.shifts()(static_cast<Index>(j));
    h -= 0.5 * kI * (std::conj(c) * mixed - c * mixed.adjoint());
    new_ops.emplace_back(mixed + c * identity);
  }
  // Remove rounding-level anti-Hermitian residue so validation sees exact symmetry.
  h = 0.5 * (h + h.adjoint());
  return LindbladModel(OperatorMatrix(std::move(h)), std::move(new_ops));
}

OperatorMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return OperatorMatrix(m);
}

OperatorMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return OperatorMatrix(m);
}

OperatorMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return OperatorMatrix(m);
}

OperatorMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;  // |g><e|
  return OperatorMatrix(m);
}

OperatorMatrix annihilation(Index dim) {
  if (dim < 1) {
    throw InputError("Fock dimension must be >= 1");
  }
  CMatrix a = CMatrix::Zero(dim, dim);
  for (Index n = 1; n < dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return OperatorMatrix(a);
}

OperatorMatrix number_operator(Index dim) {
  const CMatrix a = annihilation(dim).matrix();
  return OperatorMatrix(a.adjoint() * a);
}

OperatorMatrix quadrature_x(Index dim) {
  const CMatrix a = annihilation(dim).matrix();
  return OperatorMatrix((a + a.adjoint()) / std::numbers::sqrt2);
}

OperatorMatrix quadrature_p(Index dim) {
  const CMatrix a = annihilation(dim).matrix();
  return OperatorMatrix(-kI * (a - a.adjoint()) / std::numbers::sqrt2);
}

LindbladModel qubit_decay_model(double gamma, double rabi, double detuning) {
  if (!(gamma >= 0.0)) {
    throw InputError("qubit decay rate gamma must be >= 0");
  }
  const CMatrix h = 0.5 * detuning * pauli_z().matrix() + 0.5 * rabi * pauli_x().matrix();
  return LindbladModel(OperatorMatrix(h), {OperatorMatrix(std::sqrt(gamma) * sigma_minus().matrix())});
}

LindbladModel driven_duffing_model(Index fock_dim, double kappa, double anharmonicity, double drive_amplitude,
                                   double drive_detuning) {
  if (fock_dim < 2) {
    throw InputError("fock_dim must be >= 2");
  }
  if (!(kappa >= 0.0)) {
    throw InputError("kappa must be >= 0");
  }
  const CMatrix a = annihilation(fock_dim).matrix();
  const CMatrix n = a.adjoint() * a;
  const CMatrix h = drive_detuning * n + anharmonicity * (n * n) + drive_amplitude * (a + a.adjoint());
  return LindbladModel(OperatorMatrix(h), {OperatorMatrix(std::sqrt(kappa) * a)});
}

DrivePeriod duffing_drive_period(double drive_detuning, double phase_offset) {
  if (drive_detuning == 0.0) {
    throw InputError("drive period undefined for zero detuning");
  }
  return DrivePeriod(2.0 * std::numbers::pi / std::abs(drive_detuning), phase_offset);
}

StateVector coherent_state(Index dim, Complex alpha) {
  if (dim < 1) {
    throw InputError("Fock dimension must be >= 1");
  }
  CVector v(dim);
  Complex term = 1.0;  // alpha^n / sqrt(n!)
  for (Index n = 0; n < dim; ++n) {
    if (n > 0) {
      term *= alpha / std::sqrt(static_cast<double>(n));
    }
    v(n) = term;
  }
  return StateVector(std::move(v));
}

}  // namespace qtraj
