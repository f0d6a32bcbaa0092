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
#include <numbers>

#include <doctest.h>

#include "qtraj/errors.hpp"
#include "qtraj/model.hpp"
#include "qtraj/statespace.hpp"
#include "support/oracles.hpp"

using namespace qtraj;
using qtraj::testing::RandomMatrices;

namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("state vectors normalize on construction and reject degenerate input") {
  const StateVector psi{Complex(3.0), Complex(0.0, 4.0)};
  CHECK(psi.amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(psi[1].imag() == doctest::Approx(0.8));
  CHECK_THROWS_AS(StateVector(CVector::Zero(3)), InputError);
  CHECK_THROWS_AS(StateVector(CVector(0)), InputError);
  CHECK_THROWS_AS(StateVector::basis(2, 2), InputError);
}

TEST_CASE("expectation values") {
  SUBCASE("identity gives one") {
    RandomMatrices rng(1);
    for (Index dim : {1, 2, 5}) {
      const StateVector psi(rng.state(dim));
      CHECK(std::abs(expectation(OperatorMatrix::identity(dim), psi) - 1.0) < 1e-14);
    }
  }
  SUBCASE("sigma_z on an eigenstate") {
    CHECK(std::abs(expectation(pauli_z(), StateVector::basis(2, 0)) - 1.0) < 1e-15);
  }
  SUBCASE("sigma_x on |+>") {
    const StateVector plus{Complex(1.0), Complex(1.0)};
    const Complex value = expectation(pauli_x(), plus);
    CHECK(std::abs(value - 1.0) < 1e-15);
    CHECK(std::abs(value - testing::brute_expectation(pauli_x().matrix(), plus.amplitudes())) < 1e-15);
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(expectation(pauli_x(), StateVector::basis(3, 0)), DimensionError);
  }
  SUBCASE("Hermitian operators have real expectation values") {
    RandomMatrices rng(2);
    for (int trial = 0; trial < 200; ++trial) {
      const Index dim = 2 + trial % 6;
      const CMatrix a = rng.hermitian(dim, rng.uniform(0.1, 10.0));
      const StateVector psi(rng.state(dim));
      const Complex v = expectation(OperatorMatrix(a), psi);
      CHECK(std::abs(v.imag()) <= 1e-12);
      CHECK(std::abs(v - testing::brute_expectation(a, psi.amplitudes())) < 1e-12);
    }
  }
}

TEST_CASE("projectors") {
  CHECK(projector(StateVector::basis(2, 0)).matrix().isApprox(diag2(1, 0)));
  const DensityMatrix half = projector(StateVector{Complex(1.0), Complex(1.0)});
  CHECK((half.matrix() - CMatrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-15);

  RandomMatrices rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const Index dim = 1 + trial % 7;
    const DensityMatrix p = projector(StateVector(rng.state(dim)));
    const CMatrix p2 = p.matrix() * p.matrix();
    CHECK(std::abs(p2.trace() - 1.0) < 1e-12);
    CHECK((p2 - p.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_NOTHROW(DensityMatrix(p.matrix()));
  }
}

TEST_CASE("density matrix validation") {
  CHECK_NOTHROW(DensityMatrix(diag2(0.25, 0.75)));
  CHECK_THROWS_AS(DensityMatrix(diag2(0.5, 0.6)), InputError);
  CHECK_THROWS_AS(DensityMatrix(diag2(1.5, -0.5)), InputError);
  CMatrix skew = diag2(0.5, 0.5);
  skew(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{skew}, InputError);
  CHECK_THROWS_AS(DensityMatrix(CMatrix::Identity(2, 3)), DimensionError);
}

TEST_CASE("trace distance") {
  const DensityMatrix e(diag2(1, 0));
  const DensityMatrix g(diag2(0, 1));
  const DensityMatrix mixed(diag2(0.5, 0.5));
  CHECK(trace_distance(e, e) == doctest::Approx(0.0));
  CHECK(trace_distance(e, g) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(trace_distance(e, mixed) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(trace_distance(e, DensityMatrix(CMatrix::Identity(3, 3) / 3.0)), DimensionError);

  RandomMatrices rng(4);
  for (Index dim : {2, 4}) {
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix a(rng.density(dim));
      const DensityMatrix b(rng.density(dim));
      const DensityMatrix c(rng.density(dim));
      const double ab = trace_distance(a, b);
      CHECK(ab == doctest::Approx(trace_distance(b, a)).epsilon(1e-12));
      CHECK(ab <= trace_distance(a, c) + trace_distance(c, b) + 1e-10);
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
    }
  }
}

TEST_CASE("pure-state distance agrees with the eigenvalue route") {
  RandomMatrices rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Index dim = 2 + trial % 5;
    const StateVector a(rng.state(dim));
    const StateVector b(rng.state(dim));
    CHECK(projector_distance(a, b) == doctest::Approx(trace_distance(projector(a), projector(b))).epsilon(1e-10));
  }
  SUBCASE("global phase is invisible") {
    const StateVector a(rng.state(3));
    const StateVector b(CVector(a.amplitudes() * std::polar(1.0, 0.7)));
    CHECK(projector_distance(a, b) < 1e-15);
  }
  SUBCASE("tiny separations are resolved") {
    const StateVector a(rng.state(3));
    const StateVector b(CVector(a.amplitudes() + 1e-12 * rng.state(3)));
    const double fast = projector_distance(a, b);
    const double eig = trace_distance(projector(a), projector(b));
    CHECK(fast > 1e-14);
    CHECK(std::abs(fast - eig) < 1e-14);
  }
}

TEST_CASE("matrix exponential") {
  SUBCASE("zero gives identity") {
    CHECK(matrix_exp(CMatrix(CMatrix::Zero(3, 3))).isApprox(CMatrix::Identity(3, 3)));
  }
  SUBCASE("rotation by pi/2 about x") {
    const CMatrix a = -kI * (std::numbers::pi / 2.0) * pauli_x().matrix();
    const CMatrix expected = -kI * pauli_x().matrix();
    CHECK((matrix_exp(a) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("diagonal") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 0) = Complex(0.3, 2.0);
    a(1, 1) = -4.0;
    const CMatrix e = matrix_exp(a);
    CHECK(std::abs(e(0, 0) - std::exp(Complex(0.3, 2.0))) < 1e-14);
    CHECK(std::abs(e(1, 1) - std::exp(-4.0)) < 1e-16);
    CHECK(std::abs(e(0, 1)) == 0.0);
  }
  SUBCASE("agrees with an independent Pade implementation") {
    RandomMatrices rng(6);
    for (int trial = 0; trial < 60; ++trial) {
      const Index dim = 1 + trial % 8;
      const CMatrix a = rng.with_norm(dim, rng.uniform(0.01, 8.0));
      const CMatrix ref = testing::eigen_expm(a);
      CHECK((matrix_exp(a) - ref).norm() <= 1e-10 * ref.norm());
    }
  }
  SUBCASE("exp(A) exp(-A) = I") {
    RandomMatrices rng(7);
    for (int trial = 0; trial < 60; ++trial) {
      const Index dim = 2 + trial % 6;
      const CMatrix a = rng.with_norm(dim, rng.uniform(0.1, 5.0));
      const CMatrix prod = matrix_exp(a) * matrix_exp(CMatrix(-a));
      CHECK((prod - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("non-finite input is rejected") {
    CMatrix a = CMatrix::Zero(2, 2);
    a(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(matrix_exp(a), InputError);
  }
}
