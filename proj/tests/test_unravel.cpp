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
#include <numeric>

#include <doctest.h>

#include "qtraj/errors.hpp"
#include "qtraj/master.hpp"
#include "qtraj/unravel.hpp"
#include "support/oracles.hpp"

using namespace qtraj;

namespace {

const StateVector kExcited = StateVector::basis(2, 0);
const StateVector kGround = StateVector::basis(2, 1);

double population(const StateVector& psi, Index k) { return std::norm(psi[k]); }

struct Stats {
  double mean;
  double se;
};

Stats excited_population(const std::vector<TrajectoryRecord>& recs, std::size_t t_index) {
  std::vector<double> v;
  for (const auto& r : recs) v.push_back(population(r.states[t_index], 0));
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

bool same_records(const std::vector<TrajectoryRecord>& a, const std::vector<TrajectoryRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].times != b[i].times || a[i].jump_times != b[i].jump_times || a[i].seed != b[i].seed) return false;
    for (std::size_t j = 0; j < a[i].states.size(); ++j) {
      if (a[i].states[j].amplitudes() != b[i].states[j].amplitudes()) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("fixed points of a single step") {
  const std::vector<Complex> dxi{Complex(0.3, -0.2)};
  const std::vector<double> dw{0.4};
  SUBCASE("no dynamics") {
    const LindbladModel m(OperatorMatrix::zero(2), {OperatorMatrix::zero(2)});
    const StateVector psi{Complex(0.6), Complex(0.0, 0.8)};
    CHECK(qsd_step(m, psi, dxi, 0.01).amplitudes() == psi.amplitudes());
    CHECK(homodyne_step(m, psi, dw, 0.01).amplitudes() == psi.amplitudes());
  }
  SUBCASE("ground state is dark under decay") {
    const LindbladModel m = qubit_decay_model(1.0);
    CHECK(qsd_step(m, kGround, dxi, 0.01).amplitudes() == kGround.amplitudes());
    CHECK(homodyne_step(m, kGround, dw, 0.01).amplitudes() == kGround.amplitudes());
  }
  SUBCASE("steps keep the state normalized") {
    const LindbladModel m = qubit_decay_model(1.0, 2.0, 0.3);
    const StateVector psi{Complex(0.6), Complex(0.0, 0.8)};
    CHECK(std::abs(qsd_step(m, psi, dxi, 0.01).amplitudes().norm() - 1.0) < 1e-14);
    CHECK(std::abs(homodyne_step(m, psi, dw, 0.01).amplitudes().norm() - 1.0) < 1e-14);
  }
}

TEST_CASE("step argument checks") {
  const LindbladModel m = qubit_decay_model(1.0);
  const std::vector<Complex> two(2, Complex(0.0));
  CHECK_THROWS_AS(qsd_step(m, kExcited, two, 0.01), DimensionError);
  CHECK_THROWS_AS(qsd_step(m, StateVector::basis(3, 0), std::vector<Complex>(1), 0.01), DimensionError);
  CHECK_THROWS_AS(homodyne_step(m, kExcited, std::vector<double>(3), 0.01), DimensionError);
  CHECK_THROWS_AS(TrajectoryConfig(0.1, 1.0, 0, 1, Method::qsd), InputError);
  CHECK_THROWS_AS(TrajectoryConfig(0.3, 1.0, 1, 1, Method::qsd), InputError);
}

TEST_CASE("diffusive ensembles reproduce exponential decay") {
  const LindbladModel m = qubit_decay_model(1.0);
  for (Method method : {Method::qsd, Method::homodyne}) {
    CAPTURE(to_string(method));
    const TrajectoryConfig cfg(1e-3, 1.0, 1000, 0, method);
    const auto recs = run_ensemble(m, kExcited, cfg, 1000, 17);
    REQUIRE(recs.front().states.size() == 2);
    const Stats s = excited_population(recs, 1);
    CHECK(std::abs(s.mean - std::exp(-1.0)) < 3.0 * s.se);
    CHECK(std::abs(s.mean - std::exp(-1.0)) < 0.02);
  }
}

TEST_CASE("single jump steps") {
  TrajectoryStepper stepper(qubit_decay_model(1.0), 0.01);
  SUBCASE("a small draw fires the decay channel and lands exactly in the ground state") {
    CVector psi = kExcited.amplitudes();
    const auto fired = stepper.jump_step(psi, 0.005);
    REQUIRE(fired.has_value());
    CHECK(*fired == 0);
    CHECK(psi(0) == Complex(0.0));
    CHECK(std::abs(psi(1)) == 1.0);
  }
  SUBCASE("a large draw leaves the excited state alone") {
    CVector psi = kExcited.amplitudes();
    CHECK_FALSE(stepper.jump_step(psi, 0.5).has_value());
    CHECK(std::abs(psi(0)) == doctest::Approx(1.0));
  }
  SUBCASE("no-jump evolution of a superposition favours the ground state") {
    CVector psi = StateVector{Complex(1.0), Complex(1.0)}.amplitudes();
    CHECK_FALSE(stepper.jump_step(psi, 0.99).has_value());
    CHECK(std::norm(psi(0)) < 0.5);
    CHECK(psi.norm() == doctest::Approx(1.0));
  }
  SUBCASE("step guard") {
    TrajectoryStepper coarse(qubit_decay_model(1.0), 0.2);
    CVector psi = kExcited.amplitudes();
    CHECK_THROWS_AS(coarse.jump_step(psi, 0.5), StepSizeError);
  }
}

TEST_CASE("jump trajectories") {
  const LindbladModel m = qubit_decay_model(1.0);
  SUBCASE("at most one jump from the excited state, and the state after it is exact") {
    const TrajectoryConfig cfg(1e-3, 5.0, 100, 3, Method::jump);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const TrajectoryConfig c(cfg.dt, cfg.t_final, cfg.record_every, seed, Method::jump);
      const TrajectoryRecord r = jump_trajectory(m, kExcited, c);
      CHECK(r.jump_times.size() <= 1);
      for (std::size_t i = 0; i < r.times.size(); ++i) {
        if (!r.jump_times.empty() && r.times[i] >= r.jump_times.front().time) {
          CHECK(r.states[i][0] == Complex(0.0));
        }
      }
    }
  }
  SUBCASE("waiting times are exponential") {
    const TrajectoryConfig cfg(1e-3, 8.0, 8000, 0, Method::jump);
    const auto recs = run_ensemble(m, kExcited, cfg, 2000, 77);
    std::vector<double> waits;
    for (const auto& r : recs) {
      if (!r.jump_times.empty()) waits.push_back(r.jump_times.front().time);
    }
    // P(no jump by t = 8) = e^-8, so essentially every trajectory jumps.
    CHECK(waits.size() >= 1995);
    const double d = testing::ks_statistic(waits, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(testing::ks_p_value(d, waits.size()) > 0.01);
  }
  SUBCASE("jump ensembles reproduce exponential decay") {
    const auto recs = run_ensemble(m, kExcited, TrajectoryConfig(1e-3, 1.0, 1000, 0, Method::jump), 1000, 5);
    const Stats s = excited_population(recs, 1);
    CHECK(std::abs(s.mean - std::exp(-1.0)) < std::max(3.0 * s.se, 0.02));
  }
  SUBCASE("too coarse a step is refused") {
    CHECK_THROWS_AS(jump_trajectory(m, kExcited, TrajectoryConfig(0.5, 1.0, 1, 0, Method::jump)), StepSizeError);
  }
}

TEST_CASE("determinism and seeding") {
  const LindbladModel m = qubit_decay_model(1.0, 2.0);
  const TrajectoryConfig qsd(1e-2, 2.0, 10, 123, Method::qsd);
  const TrajectoryRecord a = run_trajectory(m, kExcited, qsd);
  const TrajectoryRecord b = run_trajectory(m, kExcited, qsd);
  CHECK(same_records({a}, {b}));
  CHECK(a.seed == 123);

  const TrajectoryConfig hom(1e-2, 2.0, 10, 123, Method::homodyne);
  const TrajectoryRecord h = run_trajectory(m, kExcited, hom);
  CHECK(h.states.back().amplitudes() != a.states.back().amplitudes());

  // Streamed noise and the equivalent explicit path give identical results.
  const NoisePath path = make_noise(NoiseKind::complex_wiener, qsd.steps(), 1, qsd.dt, 123);
  CHECK(same_records({a}, {run_trajectory(m, kExcited, qsd, path)}));
  CHECK_THROWS_AS(run_trajectory(m, kExcited, hom, path), InputError);
  CHECK_THROWS_AS(run_trajectory(m, kExcited, qsd, make_noise(NoiseKind::complex_wiener, 10, 1, qsd.dt, 1)),
                  InputError);
  CHECK_THROWS_AS(run_trajectory(m, kExcited, qsd, make_noise(NoiseKind::complex_wiener, 200, 2, qsd.dt, 1)),
                  DimensionError);
}

TEST_CASE("ensembles") {
  const LindbladModel m = qubit_decay_model(1.0, 2.0);
  for (Method method : {Method::qsd, Method::homodyne, Method::jump}) {
    CAPTURE(to_string(method));
    const TrajectoryConfig cfg(1e-2, 1.0, 25, 0, method);
    const auto one = run_ensemble(m, kExcited, cfg, 1, 9);
    const TrajectoryConfig seeded(cfg.dt, cfg.t_final, cfg.record_every, split_seed(9, 0), method);
    CHECK(same_records(one, {run_trajectory(m, kExcited, seeded)}));

    const auto w1 = run_ensemble(m, kExcited, cfg, 40, 9, 1);
    const auto w8 = run_ensemble(m, kExcited, cfg, 40, 9, 8);
    const auto serial = run_ensemble_serial(m, kExcited, cfg, 40, 9);
    CHECK(same_records(w1, w8));
    CHECK(same_records(w1, serial));

    const EnsembleMean m1 = run_ensemble_mean(m, kExcited, cfg, 300, 9, 1);
    const EnsembleMean m8 = run_ensemble_mean(m, kExcited, cfg, 300, 9, 8);
    for (std::size_t i = 0; i < m1.states.size(); ++i) CHECK(m1.states[i].matrix() == m8.states[i].matrix());
    // At t = 0 every trajectory is the initial state, so the mean is exact.
    CHECK(m1.states.front().matrix() == projector(kExcited).matrix());
  }
  CHECK_THROWS_AS(run_ensemble(m, kExcited, TrajectoryConfig(0.1, 1.0, 1, 0, Method::qsd), 0, 1), InputError);
}

TEST_CASE("ensemble error shrinks like one over root N") {
  const LindbladModel m = qubit_decay_model(1.0, 2.0);
  const TrajectoryConfig cfg(1e-2, 1.0, 100, 0, Method::qsd);
  const Stats small = excited_population(run_ensemble(m, kExcited, cfg, 250, 31), 1);
  const Stats large = excited_population(run_ensemble(m, kExcited, cfg, 1000, 32), 1);
  const double ratio = small.se / large.se;
  CHECK(ratio > 1.6);
  CHECK(ratio < 2.5);
}

TEST_CASE("pathwise comparison") {
  const TrajectoryConfig qsd(1e-3, 2.0, 1, 11, Method::qsd);
  const TrajectoryConfig hom(1e-3, 2.0, 1, 11, Method::homodyne);
  const StateVector psi0{Complex(0.6), Complex(0.0, 0.8)};
  const auto max_distance = [](const std::vector<PathwisePoint>& pts) {
    double d = 0.0;
    for (const auto& p : pts) d = std::max(d, p.distance);
    return d;
  };
  SUBCASE("identity transform") {
    const auto pts = compare_pathwise(qubit_decay_model(1.0, 2.0), RepresentationTransform::identity(1), psi0, qsd);
    CHECK(pts.size() == 2001);
    CHECK(pts.front().time == 0.0);
    CHECK(max_distance(pts) == 0.0);
  }
  SUBCASE("qsd is invariant under channel mixing") {
    const LindbladModel two(OperatorMatrix(0.5 * pauli_x().matrix()),
                            {OperatorMatrix(sigma_minus().matrix()), OperatorMatrix(0.5 * pauli_z().matrix())});
    testing::RandomMatrices rng(41);
    const auto pts =
        compare_pathwise(two, RepresentationTransform(rng.unitary(2), CVector::Zero(2)), psi0, qsd);
    CHECK(max_distance(pts) < 1e-10);
  }
  SUBCASE("homodyne is invariant under a real shift") {
    const auto pts = compare_pathwise(qubit_decay_model(1.0, 2.0),
                                      RepresentationTransform(CMatrix::Identity(1, 1), CVector::Constant(1, 0.5)),
                                      psi0, hom);
    CHECK(max_distance(pts) < 1e-10);
  }
  SUBCASE("homodyne is not invariant under a channel phase") {
    const auto pts = compare_pathwise(qubit_decay_model(1.0, 2.0),
                                      RepresentationTransform(CMatrix::Constant(1, 1, kI), CVector::Zero(1)), psi0,
                                      hom);
    CHECK(max_distance(pts) > 0.3);
  }
  SUBCASE("homodyne differences under an imaginary shift are discretization error") {
    const RepresentationTransform shift(CMatrix::Identity(1, 1), CVector::Constant(1, Complex(0.0, 0.5)));
    const NoisePath fine = make_noise(NoiseKind::real_wiener, 32000, 1, hom.dt / 16.0, 11);
    const double coarse =
        max_distance(compare_pathwise(qubit_decay_model(1.0, 2.0), shift, psi0, hom, coarsen(fine, 16)));
    const double refined = max_distance(compare_pathwise(
        qubit_decay_model(1.0, 2.0), shift, psi0, TrajectoryConfig(hom.dt / 16.0, 2.0, 1, 11, Method::homodyne), fine));
    CHECK(refined < coarse);
  }
  SUBCASE("jump is rejected") {
    CHECK_THROWS_AS(compare_pathwise(qubit_decay_model(1.0), RepresentationTransform::identity(1), psi0,
                                     TrajectoryConfig(1e-3, 1.0, 1, 0, Method::jump)),
                    InputError);
  }
}

TEST_CASE("workspace does not hold matrices") {
  const LindbladModel m = driven_duffing_model(200, 0.1, 0.2, 1.0, 1.0);
  TrajectoryStepper s(m, 1e-3);
  CHECK(s.workspace_bytes() < 200 * 200 * sizeof(Complex) / 10);
}
