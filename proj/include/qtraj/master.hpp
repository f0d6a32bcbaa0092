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

#include <cstdint>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/statespace.hpp"

namespace qtraj {

struct MasterEvolutionConfig {
  MasterEvolutionConfig(double dt, double t_final, std::int64_t record_every = 1);

  std::int64_t steps() const;

  double dt;
  double t_final;
  std::int64_t record_every;
};

struct MasterSeries {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

/// Precomputed pieces of the Lindblad generator,
/// d rho/dt = K rho + rho K^dagger + sum_k L_k rho L_k^dagger
/// with K = -iH - 1/2 sum_k L_k^dagger L_k.
class LindbladGenerator {
 public:
  explicit LindbladGenerator(const LindbladModel& model);

  Index dim() const { return drift_.rows(); }
  CMatrix apply(const CMatrix& rho) const;

 private:
  CMatrix drift_;
  std::vector<CMatrix> ops_;
  std::vector<CMatrix> ops_adjoint_;
};

/// d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dagger - 1/2 {L_k^dagger L_k, rho}).
CMatrix lindblad_rhs(const LindbladModel& model, const CMatrix& rho);
CMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);

/// Classical fixed-step RK4. Each snapshot is re-symmetrized and trace
/// renormalized and the integration continues from the cleaned state. Throws
/// NumericalError if the trace drifted by more than 1e-6 since the previous
/// snapshot.
MasterSeries rk4_evolve(const LindbladModel& model, const DensityMatrix& rho0, const MasterEvolutionConfig& cfg);

/// Column-stacking superoperator: vec(d rho/dt) = liouvillian * vec(rho), with
/// vec(A X B) = (B^T kron A) vec(X).
CMatrix liouvillian_matrix(const LindbladModel& model);

/// vec(rho_t) = exp(liouvillian * t) vec(rho0).
DensityMatrix exact_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t);

/// Null vector of the Liouvillian, reshaped and normalized to unit trace.
DensityMatrix steady_state(const LindbladModel& model);

/// Column-stacked vec and its inverse.
CVector vectorize(const CMatrix& m);
CMatrix unvectorize(const CVector& v, Index dim);

}  // namespace qtraj
