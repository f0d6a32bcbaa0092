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

#include "qtraj/master.hpp"

#include <cmath>
#include <string>

#include "qtraj/errors.hpp"
#include "qtraj/time_grid.hpp"

namespace qtraj {

namespace {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void check_dims(const LindbladModel& model, const CMatrix& rho) {
  if (rho.rows() != model.dim() || rho.cols() != model.dim()) {
    throw DimensionError("density matrix is " + std::to_string(rho.rows()) + "x" + std::to_string(rho.cols()) +
                         ", model dim is " + std::to_string(model.dim()));
  }
}

}  // namespace

MasterEvolutionConfig::MasterEvolutionConfig(double dt_, double t_final_, std::int64_t record_every_)
    : dt(dt_), t_final(t_final_), record_every(record_every_) {
  if (record_every < 1) {
    throw InputError("record_every must be >= 1");
  }
  step_count(dt, t_final);
}

std::int64_t MasterEvolutionConfig::steps() const { return step_count(dt, t_final); }

LindbladGenerator::LindbladGenerator(const LindbladModel& model) {
  drift_ = -kI * model.hamiltonian().matrix();
  for (const auto& op : model.lindblad_ops()) {
    ops_.push_back(op.matrix());
    ops_adjoint_.push_back(op.matrix().adjoint());
    drift_.noalias() -= 0.5 * ops_adjoint_.back() * ops_.back();
  }
}

CMatrix LindbladGenerator::apply(const CMatrix& rho) const {
  CMatrix out(dim(), dim());
  out.noalias() = drift_ * rho;
  out.noalias() += rho * drift_.adjoint();
  CMatrix tmp(dim(), dim());
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    tmp.noalias() = ops_[k] * rho;
    out.noalias() += tmp * ops_adjoint_[k];
  }
  return out;
}

CMatrix lindblad_rhs(const LindbladModel& model, const CMatrix& rho) {
  check_dims(model, rho);
  return LindbladGenerator(model).apply(rho);
}

CMatrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) { return lindblad_rhs(model, rho.matrix()); }

MasterSeries rk4_evolve(const LindbladModel& model, const DensityMatrix& rho0, const MasterEvolutionConfig& cfg) {
  check_dims(model, rho0.matrix());
  const LindbladGenerator gen(model);
  const std::int64_t steps = cfg.steps();
  const double dt = cfg.dt;

  MasterSeries series;
  series.times.push_back(0.0);
  series.states.push_back(rho0);

  CMatrix rho = rho0.matrix();
  for (std::int64_t step = 1; step <= steps; ++step) {
    const CMatrix k1 = gen.apply(rho);
    const CMatrix k2 = gen.apply(rho + 0.5 * dt * k1);
    const CMatrix k3 = gen.apply(rho + 0.5 * dt * k2);
    const CMatrix k4 = gen.apply(rho + dt * k3);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (is_recorded_step(step, steps, cfg.record_every)) {
      if (!rho.allFinite()) {
        throw NumericalError("master evolution blew up at t = " + std::to_string(step * dt) + "; reduce dt");
      }
      const double drift = std::abs(rho.trace() - Complex(1.0));
      if (drift > 1e-6) {
        throw NumericalError("trace drifted by " + std::to_string(drift) + " at t = " + std::to_string(step * dt) +
                             "; reduce dt");
      }
      rho = symmetrize_and_normalize(rho);
      series.times.push_back(static_cast<double>(step) * dt);
      series.states.emplace_back(rho);
    }
  }
  return series;
}

CMatrix liouvillian_matrix(const LindbladModel& model) {
  const Index n = model.dim();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix& h = model.hamiltonian().matrix();
  CMatrix l = -kI * (kron(id, h) - kron(h.transpose(), id));
  for (const auto& op : model.lindblad_ops()) {
    const CMatrix& a = op.matrix();
    const CMatrix ada = a.adjoint() * a;
    l += kron(a.conjugate(), a) - 0.5 * kron(id, ada) - 0.5 * kron(ada.transpose(), id);
  }
  return l;
}

CVector vectorize(const CMatrix& m) { return Eigen::Map<const CVector>(m.data(), m.size()); }

CMatrix unvectorize(const CVector& v, Index dim) {
  if (v.size() != dim * dim) {
    throw DimensionError("cannot reshape vector of length " + std::to_string(v.size()) + " to " +
                         std::to_string(dim) + "x" + std::to_string(dim));
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

DensityMatrix exact_evolve(const LindbladModel& model, const DensityMatrix& rho0, double t) {
  check_dims(model, rho0.matrix());
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InputError("exact_evolve: t must be >= 0");
  }
  if (t == 0.0) {
    return rho0;
  }
  const CMatrix propagator = matrix_exp(CMatrix(liouvillian_matrix(model) * t));
  const CMatrix rho = unvectorize(propagator * vectorize(rho0.matrix()), model.dim());
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

DensityMatrix steady_state(const LindbladModel& model) {
  Eigen::ComplexEigenSolver<CMatrix> solver(liouvillian_matrix(model));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("Liouvillian eigensolver did not converge");
  }
  Index best = 0;
  solver.eigenvalues().cwiseAbs().minCoeff(&best);
  CMatrix rho = unvectorize(solver.eigenvectors().col(best), model.dim());
  rho /= rho.trace();  // fixes the eigenvector's arbitrary complex phase
  return DensityMatrix(symmetrize_and_normalize(rho));
}

}  // namespace qtraj
