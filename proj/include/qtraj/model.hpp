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

#include <vector>

#include "qtraj/statespace.hpp"

namespace qtraj {

/// Hamiltonian H (Hermitian, hbar = 1) plus Lindblad operators L_1..L_K over
/// one Hilbert-space dimension. K = 0 is closed unitary evolution.
class LindbladModel {
 public:
  LindbladModel(OperatorMatrix hamiltonian, std::vector<OperatorMatrix> lindblad_ops);

  Index dim() const { return hamiltonian_.dim(); }
  std::size_t channels() const { return lindblad_ops_.size(); }
  const OperatorMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<OperatorMatrix>& lindblad_ops() const { return lindblad_ops_; }

 private:
  OperatorMatrix hamiltonian_;
  std::vector<OperatorMatrix> lindblad_ops_;
};

/// Re-expression of the same master equation: unitary mixing u of the
/// Lindblad operators followed by complex shifts c, with the Hamiltonian
/// compensated so that the generator is unchanged.
class RepresentationTransform {
 public:
  RepresentationTransform(CMatrix mixing, CVector shifts);

  static RepresentationTransform identity(std::size_t channels);

  std::size_t channels() const { return static_cast<std::size_t>(shifts_.size()); }
  const CMatrix& mixing() const { return mixing_; }
  const CVector& shifts() const { return shifts_; }
  bool has_shifts() const { return shifts_.size() > 0 && shifts_.cwiseAbs().maxCoeff() > 0.0; }

 private:
  CMatrix mixing_;
  CVector shifts_;
};

/// Stroboscopic sampling period for time-periodic dynamics.
struct DrivePeriod {
  DrivePeriod(double period, double phase_offset = 0.0);

  double period;
  double phase_offset;
};

/// L'_j = sum_k u_jk L_k + c_j,  H' = H - (i/2) sum_j (c_j^* Lm_j - c_j Lm_j^dagger)
/// where Lm_j = sum_k u_jk L_k. Mixing is applied before the shift.
LindbladModel apply_transform(const LindbladModel& model, const RepresentationTransform& transform);

// Operator builders. Qubit basis order is (excited, ground).
OperatorMatrix pauli_x();
OperatorMatrix pauli_y();
OperatorMatrix pauli_z();
OperatorMatrix sigma_minus();

/// Truncated-Fock annihilation operator, a|n> = sqrt(n)|n-1>.
OperatorMatrix annihilation(Index dim);
OperatorMatrix number_operator(Index dim);
/// x = (a + a^dagger)/sqrt(2), p = -i(a - a^dagger)/sqrt(2), so [x, p] = i
/// away from the truncation edge.
OperatorMatrix quadrature_x(Index dim);
OperatorMatrix quadrature_p(Index dim);

/// H = (detuning/2) sigma_z + (rabi/2) sigma_x, L = sqrt(gamma) sigma_minus.
/// gamma = 0 keeps a zero Lindblad operator so the channel count is stable.
LindbladModel qubit_decay_model(double gamma, double rabi = 0.0, double detuning = 0.0);

/// Rotating-frame driven Kerr (Duffing) oscillator in a truncated Fock basis:
/// H = detuning n + anharmonicity n^2 + drive (a + a^dagger), L = sqrt(kappa) a.
LindbladModel driven_duffing_model(Index fock_dim, double kappa, double anharmonicity, double drive_amplitude,
                                   double drive_detuning);

/// Stroboscopic period 2 pi / |drive_detuning| used with driven_duffing_model.
DrivePeriod duffing_drive_period(double drive_detuning, double phase_offset = 0.0);

/// Truncated coherent state |alpha> in a Fock basis of size dim, renormalized.
StateVector coherent_state(Index dim, Complex alpha);

}  // namespace qtraj
