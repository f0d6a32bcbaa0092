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

#include <cmath>

#include <doctest.h>

#include "qtraj/errors.hpp"
#include "qtraj/master.hpp"
#include "qtraj/model.hpp"
#include "support/oracles.hpp"

using namespace qtraj;
using qtraj::testing::RandomMatrices;

namespace {

std::vector<CMatrix> raw_ops(const LindbladModel& m) {
  std::vector<CMatrix> out;
  for (const auto& op : m.lindblad_ops()) out.push_back(op.matrix());
  return out;
}

CMatrix textbook_rhs(const LindbladModel& m, const CMatrix& rho) {
  return testing::textbook_lindblad(m.hamiltonian().matrix(), raw_ops(m), rho);
}

LindbladModel random_model(RandomMatrices& rng, Index dim, std::size_t channels) {
  std::vector<OperatorMatrix> ops;
  for (std::size_t k = 0; k < channels; ++k) ops.emplace_back(rng.with_norm(dim, rng.uniform(0.2, 1.5)));
  return LindbladModel(OperatorMatrix(rng.hermitian(dim, rng.uniform(0.2, 3.0))), std::move(ops));
}

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("identity transform leaves the model unchanged") {
  RandomMatrices rng(11);
  const LindbladModel m = random_model(rng, 3, 2);
  const LindbladModel t = apply_transform(m, RepresentationTransform::identity(2));
  CHECK(max_diff(t.hamiltonian().matrix(), m.hamiltonian().matrix()) == 0.0);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(max_diff(t.lindblad_ops()[k].matrix(), m.lindblad_ops()[k].matrix()) == 0.0);
  }
}

TEST_CASE("a global phase on a single channel changes nothing physical") {
  RandomMatrices rng(12);
  const LindbladModel m = qubit_decay_model(0.7, 1.3, 0.4);
  const Complex phase = std::polar(1.0, 1.1);
  const LindbladModel t =
      apply_transform(m, RepresentationTransform(CMatrix::Constant(1, 1, phase), CVector::Zero(1)));
  CHECK(max_diff(t.lindblad_ops()[0].matrix(), phase * m.lindblad_ops()[0].matrix()) < 1e-15);
  CHECK(max_diff(t.hamiltonian().matrix(), m.hamiltonian().matrix()) < 1e-15);
  for (int i = 0; i < 20; ++i) {
    const CMatrix rho = rng.density(2);
    CHECK(max_diff(lindblad_rhs(t, rho), lindblad_rhs(m, rho)) < 1e-12);
  }
}

TEST_CASE("a shifted decay operator generates the same master equation") {
  RandomMatrices rng(13);
  const LindbladModel m = qubit_decay_model(1.0);
  const LindbladModel t =
      apply_transform(m, RepresentationTransform(CMatrix::Identity(1, 1), CVector::Constant(1, Complex(0.3, 0.1))));
  for (int i = 0; i < 20; ++i) {
    const CMatrix rho = rng.density(2);
    CHECK(max_diff(textbook_rhs(t, rho), textbook_rhs(m, rho)) < 1e-12);
  }
}

TEST_CASE("random mixings and shifts preserve the generator") {
  RandomMatrices rng(14);
  for (Index dim : {2, 3, 4}) {
    for (std::size_t k = 1; k <= 3; ++k) {
      const LindbladModel m = random_model(rng, dim, k);
      CVector shifts(static_cast<Index>(k));
      for (Index j = 0; j < shifts.size(); ++j) shifts(j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      const LindbladModel t =
          apply_transform(m, RepresentationTransform(rng.unitary(static_cast<Index>(k)), shifts));
      for (int i = 0; i < 10; ++i) {
        const CMatrix rho = rng.density(dim);
        CHECK(max_diff(textbook_rhs(t, rho), textbook_rhs(m, rho)) < 1e-11);
      }
    }
  }
}

TEST_CASE("successive mixings compose as u2 u1") {
  RandomMatrices rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 3);
    const LindbladModel m = random_model(rng, 3, k);
    const CMatrix u1 = rng.unitary(static_cast<Index>(k));
    const CMatrix u2 = rng.unitary(static_cast<Index>(k));
    const CVector zero = CVector::Zero(static_cast<Index>(k));
    const LindbladModel twice =
        apply_transform(apply_transform(m, RepresentationTransform(u1, zero)), RepresentationTransform(u2, zero));
    const LindbladModel once = apply_transform(m, RepresentationTransform(u2 * u1, zero));
    CHECK(max_diff(twice.hamiltonian().matrix(), once.hamiltonian().matrix()) < 1e-12);
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(max_diff(twice.lindblad_ops()[j].matrix(), once.lindblad_ops()[j].matrix()) < 1e-12);
    }
  }
}

TEST_CASE("invalid transforms are rejected") {
  CMatrix not_unitary = CMatrix::Identity(2, 2);
  not_unitary(0, 1) = 0.5;
  CHECK_THROWS_AS(RepresentationTransform(not_unitary, CVector::Zero(2)), InputError);
  CHECK_THROWS_AS(RepresentationTransform(CMatrix::Identity(2, 2), CVector::Zero(1)), DimensionError);
  CHECK_THROWS_AS(apply_transform(qubit_decay_model(1.0), RepresentationTransform::identity(2)), DimensionError);
}

TEST_CASE("qubit decay builder") {
  SUBCASE("pure decay") {
    const LindbladModel m = qubit_decay_model(1.0, 0.0, 0.0);
    CHECK(m.dim() == 2);
    CHECK(m.hamiltonian().matrix().cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_diff(m.lindblad_ops()[0].matrix(), sigma_minus().matrix()) == 0.0);
  }
  SUBCASE("gamma = 0 keeps a zero channel") {
    const LindbladModel m = qubit_decay_model(0.0, 1.0, 0.0);
    REQUIRE(m.channels() == 1);
    CHECK(m.lindblad_ops()[0].matrix().cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_diff(m.hamiltonian().matrix(), 0.5 * pauli_x().matrix()) == 0.0);
  }
  SUBCASE("decay operator maps excited to ground with amplitude sqrt(gamma)") {
    const CMatrix l = qubit_decay_model(2.0).lindblad_ops()[0].matrix();
    CHECK(l(1, 0).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(l(0, 0)) + std::abs(l(0, 1)) + std::abs(l(1, 1)) == 0.0);
  }
  SUBCASE("detuning enters as sigma_z / 2") {
    const LindbladModel m = qubit_decay_model(0.0, 0.0, 3.0);
    CHECK(max_diff(m.hamiltonian().matrix(), 1.5 * pauli_z().matrix()) == 0.0);
  }
  CHECK_THROWS_AS(qubit_decay_model(-0.1), InputError);
}

TEST_CASE("Duffing builder") {
  SUBCASE("ladder operator") {
    const CMatrix a = annihilation(3).matrix();
    CHECK(a(0, 1).real() == doctest::Approx(1.0));
    CHECK(a(1, 2).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));
  }
  SUBCASE("undamped undriven model is diagonal with a zero channel") {
    const LindbladModel m = driven_duffing_model(5, 0.0, 0.5, 0.0, 1.0);
    const CMatrix h = m.hamiltonian().matrix();
    CHECK((h - CMatrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
    for (Index n = 0; n < 5; ++n) {
      CHECK(h(n, n).real() == doctest::Approx(n + 0.5 * n * n));
    }
    CHECK(m.lindblad_ops()[0].matrix().cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("acceptance-scale parameters construct") {
    const LindbladModel m = driven_duffing_model(40, 0.125, 0.5, 5.0, 1.0);
    CHECK(m.dim() == 40);
    CHECK(m.hamiltonian().is_hermitian(0.0));
    CHECK(duffing_drive_period(1.0).period == doctest::Approx(2.0 * std::numbers::pi));
  }
  CHECK_THROWS_AS(driven_duffing_model(1, 0.1, 0.0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(duffing_drive_period(0.0), InputError);
}

TEST_CASE("quadratures and coherent states") {
  const Index dim = 40;
  const CMatrix x = quadrature_x(dim).matrix();
  const CMatrix p = quadrature_p(dim).matrix();
  const CMatrix comm = x * p - p * x;
  // [x, p] = i away from the truncation edge.
  CHECK(std::abs(comm(3, 3) - kI) < 1e-12);
  const StateVector alpha = coherent_state(dim, Complex(1.5, -0.5));
  const Complex a_mean = expectation(annihilation(dim), alpha);
  CHECK(std::abs(a_mean - Complex(1.5, -0.5)) < 1e-10);
  CHECK(expectation(quadrature_x(dim), alpha).real() == doctest::Approx(std::sqrt(2.0) * 1.5));
  CHECK(expectation(quadrature_p(dim), alpha).real() == doctest::Approx(std::sqrt(2.0) * -0.5));
}

TEST_CASE("drive period validation") {
  CHECK_THROWS_AS(DrivePeriod(0.0), InputError);
  CHECK_THROWS_AS(DrivePeriod(1.0, 1.0), InputError);
  CHECK_NOTHROW(DrivePeriod(1.0, 0.5));
}
