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
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/statespace.hpp"

namespace qtraj {

/// Pure-state unravelings. qsd is the heterodyne unraveling.
enum class Method { qsd, homodyne, jump };

/// euler: Euler-Maruyama on the full Ito equation.
/// split: the Hamiltonian part is applied exactly as exp(-iH dt) after the
/// Euler-Maruyama update of the dissipative and noise terms. Needed for
/// models whose spectrum makes explicit Euler unstable at practical dt.
enum class Scheme { euler, split };

const char* to_string(Method method);
const char* to_string(Scheme scheme);
NoiseKind noise_kind(Method method);

struct TrajectoryConfig {
  TrajectoryConfig(double dt, double t_final, std::int64_t record_every, std::uint64_t seed, Method method,
                   Scheme scheme = Scheme::euler);

  std::int64_t steps() const;

  double dt;
  double t_final;
  std::int64_t record_every;
  std::uint64_t seed;
  Method method;
  Scheme scheme;
};

struct JumpEvent {
  double time;
  std::size_t channel;

  bool operator==(const JumpEvent&) const = default;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<StateVector> states;
  std::vector<JumpEvent> jump_times;
  std::uint64_t seed = 0;
};

/// Static per-model data shared by all trajectories of a run: O(K N^2).
struct StepOperators {
  StepOperators(const LindbladModel& model, double dt, Scheme scheme);

  Index dim;
  double dt;
  Scheme scheme;
  CMatrix hamiltonian;
  std::vector<CMatrix> ops;
  CMatrix decay;       // sum_k L_k^dagger L_k
  CMatrix propagator;  // exp(-iH dt), split scheme only

  std::size_t bytes() const;
};

/// One trajectory's mutable state. Holds O(K N) scratch and no N x N data.
class TrajectoryStepper {
 public:
  explicit TrajectoryStepper(std::shared_ptr<const StepOperators> ops);
  TrajectoryStepper(const LindbladModel& model, double dt, Scheme scheme = Scheme::euler);

  /// |d psi> = [-iH + sum_k (<L_k^dag> L_k - 1/2 L_k^dag L_k - 1/2 |<L_k>|^2)] psi dt
  ///         + sum_k (L_k - <L_k>) psi d xi_k,  then renormalize.
  void qsd_step(CVector& psi, std::span<const Complex> dxi);

  /// |d psi> = [-iH + sum_k (1/2 <x_k> L_k - 1/2 L_k^dag L_k - 1/8 <x_k>^2)] psi dt
  ///         + sum_k (L_k - 1/2 <x_k>) psi dW_k,  x_k = L_k + L_k^dag,  then renormalize.
  void homodyne_step(CVector& psi, std::span<const double> dw);

  /// First-order quantum-jump step driven by one uniform draw. Returns the
  /// channel that fired, if any. Throws StepSizeError if the total jump
  /// probability in this step exceeds 0.1.
  std::optional<std::size_t> jump_step(CVector& psi, double uniform);

  const StepOperators& operators() const { return *ops_; }
  std::size_t workspace_bytes() const;

 private:
  void apply_lindblad_ops(const CVector& psi);
  void finish(CVector& psi);

  std::shared_ptr<const StepOperators> ops_;
  std::vector<CVector> l_psi_;
  std::vector<Complex> means_;
  CVector work_;
  CVector delta_;
};

/// Single Euler-Maruyama QSD step on a model; constructs a fresh stepper.
StateVector qsd_step(const LindbladModel& model, const StateVector& psi, std::span<const Complex> dxi, double dt);
StateVector homodyne_step(const LindbladModel& model, const StateVector& psi, std::span<const double> dw, double dt);

TrajectoryRecord jump_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg);

/// Dispatches on cfg.method. Noise is streamed from cfg.seed, so the result is
/// a deterministic function of (model, psi0, cfg).
TrajectoryRecord run_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg);

/// Same as run_trajectory but driven by an explicit noise path, which must
/// match the method's noise kind, the model's channel count and cfg.dt.
TrajectoryRecord run_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                                const NoisePath& noise);

/// Trajectory i runs with seed split_seed(master_seed, i). `workers` <= 0
/// uses the OpenMP default. Results do not depend on the worker count.
std::vector<TrajectoryRecord> run_ensemble(const LindbladModel& model, const StateVector& psi0,
                                           const TrajectoryConfig& cfg, std::int64_t n_traj,
                                           std::uint64_t master_seed, int workers = 0);

/// Single-threaded reference for run_ensemble.
std::vector<TrajectoryRecord> run_ensemble_serial(const LindbladModel& model, const StateVector& psi0,
                                                  const TrajectoryConfig& cfg, std::int64_t n_traj,
                                                  std::uint64_t master_seed);

/// Mean projector at every recorded time without keeping all records.
/// Trajectories run in parallel chunks; the sum is accumulated in
/// trajectory-index order so the result is bit-identical for any worker count.
struct EnsembleMean {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

EnsembleMean run_ensemble_mean(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                               std::int64_t n_traj, std::uint64_t master_seed, int workers = 0);

struct PathwisePoint {
  double time;
  double distance;
};

/// Runs cfg.method on (model, noise) and on (apply_transform(model, transform),
/// transformed noise) in lockstep and reports the trace distance between the
/// two projectors at every step, t = 0 included. QSD noise is rotated by
/// transform_noise; homodyne noise is shared unchanged. Jump is not supported.
std::vector<PathwisePoint> compare_pathwise(const LindbladModel& model, const RepresentationTransform& transform,
                                            const StateVector& psi0, const TrajectoryConfig& cfg);

std::vector<PathwisePoint> compare_pathwise(const LindbladModel& model, const RepresentationTransform& transform,
                                            const StateVector& psi0, const TrajectoryConfig& cfg,
                                            const NoisePath& noise);

}  // namespace qtraj
