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

// Serial vs OpenMP ensembles, and one trajectory step vs one master-equation
// step as the Hilbert-space dimension grows.

#include <benchmark/benchmark.h>

#include "qtraj/master.hpp"
#include "qtraj/unravel.hpp"

namespace {

using namespace qtraj;

const LindbladModel& qubit() {
  static const LindbladModel m = qubit_decay_model(1.0, 2.0, 0.5);
  return m;
}

const TrajectoryConfig kEnsembleCfg(1e-3, 1.0, 100, 0, Method::qsd);
constexpr std::int64_t kTrajectories = 64;

void BM_EnsembleSerial(benchmark::State& state) {
  for (auto _ : state) {
    auto recs = run_ensemble_serial(qubit(), StateVector::basis(2, 0), kEnsembleCfg, kTrajectories, 1);
    benchmark::DoNotOptimize(recs);
  }
}
BENCHMARK(BM_EnsembleSerial)->Unit(benchmark::kMillisecond);

void BM_EnsembleOpenMP(benchmark::State& state) {
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto recs = run_ensemble(qubit(), StateVector::basis(2, 0), kEnsembleCfg, kTrajectories, 1, workers);
    benchmark::DoNotOptimize(recs);
  }
}
BENCHMARK(BM_EnsembleOpenMP)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

LindbladModel oscillator(Index n) { return driven_duffing_model(n, 0.1, 0.01, 1.0, 1.0); }

void BM_QsdStep(benchmark::State& state) {
  const Index n = state.range(0);
  TrajectoryStepper stepper(oscillator(n), 1e-4);
  CVector psi = coherent_state(n, Complex(1.0, 0.0)).amplitudes();
  const std::vector<Complex> dxi{Complex(0.003, -0.001)};
  for (auto _ : state) {
    stepper.qsd_step(psi, dxi);
    benchmark::DoNotOptimize(psi.data());
  }
}
BENCHMARK(BM_QsdStep)->Arg(50)->Arg(100)->Arg(200)->Arg(400);

void BM_MasterStep(benchmark::State& state) {
  const Index n = state.range(0);
  const LindbladModel m = oscillator(n);
  const DensityMatrix rho0 = projector(coherent_state(n, Complex(1.0, 0.0)));
  for (auto _ : state) {
    auto s = rk4_evolve(m, rho0, MasterEvolutionConfig(1e-4, 1e-4));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_MasterStep)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
