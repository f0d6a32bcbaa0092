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

#include "qtraj/unravel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "qtraj/errors.hpp"
#include "qtraj/time_grid.hpp"

namespace qtraj {

namespace {

constexpr double kMaxJumpProbability = 0.1;
constexpr std::int64_t kMeanChunk = 256;

void check_state(const LindbladModel& model, const StateVector& psi) {
  if (psi.dim() != model.dim()) {
    throw DimensionError("state dim " + std::to_string(psi.dim()) + " vs model dim " + std::to_string(model.dim()));
  }
}

// Adapter giving a NoisePath the same interface as NoiseStream.
class PathSource {
 public:
  explicit PathSource(const NoisePath& path) : path_(path) {}
  std::span<const Complex> complex_row(std::int64_t step) { return path_.complex_row(step); }
  std::span<const double> real_row(std::int64_t step) { return path_.real_row(step); }

 private:
  const NoisePath& path_;
};

std::int64_t noise_channels(const LindbladModel& model, Method method) {
  return method == Method::jump ? 1 : static_cast<std::int64_t>(model.channels());
}

using SharedOperators = std::shared_ptr<const StepOperators>;

template <class Source>
TrajectoryRecord integrate(const SharedOperators& ops, const StateVector& psi0, const TrajectoryConfig& cfg,
                           Source& noise) {
  const std::int64_t steps = cfg.steps();
  TrajectoryStepper stepper(ops);

  TrajectoryRecord rec;
  rec.seed = cfg.seed;
  rec.times.push_back(0.0);
  rec.states.push_back(psi0);

  CVector psi = psi0.amplitudes();
  for (std::int64_t step = 0; step < steps; ++step) {
    switch (cfg.method) {
      case Method::qsd:
        stepper.qsd_step(psi, noise.complex_row(step));
        break;
      case Method::homodyne:
        stepper.homodyne_step(psi, noise.real_row(step));
        break;
      case Method::jump:
        if (auto channel = stepper.jump_step(psi, noise.real_row(step)[0])) {
          rec.jump_times.push_back({static_cast<double>(step + 1) * cfg.dt, *channel});
        }
        break;
    }
    if (is_recorded_step(step + 1, steps, cfg.record_every)) {
      rec.times.push_back(static_cast<double>(step + 1) * cfg.dt);
      rec.states.emplace_back(psi);
    }
  }
  return rec;
}

TrajectoryConfig with_seed(const TrajectoryConfig& cfg, std::uint64_t seed) {
  TrajectoryConfig out = cfg;
  out.seed = seed;
  return out;
}

SharedOperators make_operators(const LindbladModel& model, const TrajectoryConfig& cfg) {
  return std::make_shared<const StepOperators>(model, cfg.dt, cfg.scheme);
}

TrajectoryRecord stream_trajectory(const SharedOperators& ops, const LindbladModel& model, const StateVector& psi0,
                                   const TrajectoryConfig& cfg) {
  NoiseStream noise(noise_kind(cfg.method), noise_channels(model, cfg.method), cfg.dt, cfg.seed);
  return integrate(ops, psi0, cfg, noise);
}

void check_ensemble_size(std::int64_t n_traj) {
  if (n_traj < 1) {
    throw InputError("n_traj must be >= 1");
  }
}

// Runs body(i) for i in [begin, end) on `workers` threads. Exceptions are
// captured per index and the lowest-index one is rethrown.
template <class Body>
void parallel_for(std::int64_t begin, std::int64_t end, int workers, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(end - begin));
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = begin; i < end; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i - begin)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace

const char* to_string(Method method) {
  switch (method) {
    case Method::qsd:
      return "qsd";
    case Method::homodyne:
      return "homodyne";
    case Method::jump:
      return "jump";
  }
  return "unknown";
}

const char* to_string(Scheme scheme) { return scheme == Scheme::euler ? "euler" : "split"; }

NoiseKind noise_kind(Method method) {
  switch (method) {
    case Method::qsd:
      return NoiseKind::complex_wiener;
    case Method::homodyne:
      return NoiseKind::real_wiener;
    case Method::jump:
      return NoiseKind::uniform_jump;
  }
  return NoiseKind::complex_wiener;
}

TrajectoryConfig::TrajectoryConfig(double dt_, double t_final_, std::int64_t record_every_, std::uint64_t seed_,
                                   Method method_, Scheme scheme_)
    : dt(dt_), t_final(t_final_), record_every(record_every_), seed(seed_), method(method_), scheme(scheme_) {
  if (record_every < 1) {
    throw InputError("record_every must be >= 1");
  }
  step_count(dt, t_final);
}

std::int64_t TrajectoryConfig::steps() const { return step_count(dt, t_final); }

StepOperators::StepOperators(const LindbladModel& model, double dt_, Scheme scheme_)
    : dim(model.dim()), dt(dt_), scheme(scheme_), hamiltonian(model.hamiltonian().matrix()) {
  if (!(dt > 0.0)) {
    throw InputError("dt must be positive");
  }
  decay = CMatrix::Zero(dim, dim);
  for (const auto& op : model.lindblad_ops()) {
    ops.push_back(op.matrix());
    decay.noalias() += op.matrix().adjoint() * op.matrix();
  }
  if (scheme == Scheme::split) {
    propagator = matrix_exp(CMatrix(-kI * dt * hamiltonian));
  }
}

std::size_t StepOperators::bytes() const {
  std::size_t n = static_cast<std::size_t>(hamiltonian.size() + decay.size() + propagator.size());
  for (const auto& op : ops) {
    n += static_cast<std::size_t>(op.size());
  }
  return n * sizeof(Complex);
}

TrajectoryStepper::TrajectoryStepper(std::shared_ptr<const StepOperators> ops) : ops_(std::move(ops)) {
  l_psi_.assign(ops_->ops.size(), CVector(ops_->dim));
  means_.assign(ops_->ops.size(), Complex(0.0));
  work_.resize(ops_->dim);
  delta_.resize(ops_->dim);
}

TrajectoryStepper::TrajectoryStepper(const LindbladModel& model, double dt, Scheme scheme)
    : TrajectoryStepper(std::make_shared<const StepOperators>(model, dt, scheme)) {}

std::size_t TrajectoryStepper::workspace_bytes() const {
  std::size_t n = static_cast<std::size_t>(work_.size() + delta_.size());
  for (const auto& v : l_psi_) {
    n += static_cast<std::size_t>(v.size());
  }
  return (n + means_.size()) * sizeof(Complex);
}

void TrajectoryStepper::apply_lindblad_ops(const CVector& psi) {
  for (std::size_t k = 0; k < ops_->ops.size(); ++k) {
    l_psi_[k].noalias() = ops_->ops[k] * psi;
    means_[k] = psi.dot(l_psi_[k]);
  }
}

void TrajectoryStepper::finish(CVector& psi) {
  psi += delta_;
  if (ops_->scheme == Scheme::split) {
    work_.noalias() = ops_->propagator * psi;
    psi.swap(work_);
  }
  const double norm = psi.norm();
  if (!std::isfinite(norm) || norm == 0.0) {
    throw NumericalError("trajectory step produced a non-finite state; reduce dt");
  }
  psi /= norm;
}

void TrajectoryStepper::qsd_step(CVector& psi, std::span<const Complex> dxi) {
  const StepOperators& op = *ops_;
  if (dxi.size() != op.ops.size()) {
    throw DimensionError("qsd_step needs one increment per Lindblad channel");
  }
  const double dt = op.dt;
  apply_lindblad_ops(psi);
  delta_.noalias() = (-0.5 * dt) * (op.decay * psi);
  if (op.scheme == Scheme::euler) {
    delta_.noalias() += (-kI * dt) * (op.hamiltonian * psi);
  }
  Complex psi_coeff = 0.0;
  for (std::size_t k = 0; k < op.ops.size(); ++k) {
    const Complex mean = means_[k];
    delta_ += (std::conj(mean) * dt + dxi[k]) * l_psi_[k];
    psi_coeff -= 0.5 * std::norm(mean) * dt + mean * dxi[k];
  }
  delta_ += psi_coeff * psi;
  finish(psi);
}

void TrajectoryStepper::homodyne_step(CVector& psi, std::span<const double> dw) {
  const StepOperators& op = *ops_;
  if (dw.size() != op.ops.size()) {
    throw DimensionError("homodyne_step needs one increment per Lindblad channel");
  }
  const double dt = op.dt;
  apply_lindblad_ops(psi);
  delta_.noalias() = (-0.5 * dt) * (op.decay * psi);
  if (op.scheme == Scheme::euler) {
    delta_.noalias() += (-kI * dt) * (op.hamiltonian * psi);
  }
  double psi_coeff = 0.0;
  for (std::size_t k = 0; k < op.ops.size(); ++k) {
    const double x = 2.0 * means_[k].real();
    delta_ += (0.5 * x * dt + dw[k]) * l_psi_[k];
    psi_coeff -= 0.125 * x * x * dt + 0.5 * x * dw[k];
  }
  delta_ += psi_coeff * psi;
  finish(psi);
}

std::optional<std::size_t> TrajectoryStepper::jump_step(CVector& psi, double uniform) {
  const StepOperators& op = *ops_;
  const double dt = op.dt;
  apply_lindblad_ops(psi);
  double total = 0.0;
  for (const auto& v : l_psi_) {
    total += v.squaredNorm() * dt;
  }
  if (total > kMaxJumpProbability) {
    throw StepSizeError("jump probability per step is " + std::to_string(total) + " (> 0.1); reduce dt");
  }
  if (uniform < total) {
    double cumulative = 0.0;
    for (std::size_t k = 0; k < l_psi_.size(); ++k) {
      cumulative += l_psi_[k].squaredNorm() * dt;
      if (uniform < cumulative) {
        const double norm = l_psi_[k].norm();
        if (norm == 0.0) {
          throw std::logic_error("selected a jump channel with zero probability");
        }
        psi = l_psi_[k] / norm;
        return k;
      }
    }
    // Rounding in the cumulative sum: fall through to the last nonzero channel.
    for (std::size_t k = l_psi_.size(); k-- > 0;) {
      const double norm = l_psi_[k].norm();
      if (norm > 0.0) {
        psi = l_psi_[k] / norm;
        return k;
      }
    }
    throw std::logic_error("jump fired with no nonzero channel");
  }
  delta_.noalias() = (-0.5 * dt) * (op.decay * psi);
  if (op.scheme == Scheme::euler) {
    delta_.noalias() += (-kI * dt) * (op.hamiltonian * psi);
  }
  finish(psi);
  return std::nullopt;
}

StateVector qsd_step(const LindbladModel& model, const StateVector& psi, std::span<const Complex> dxi, double dt) {
  check_state(model, psi);
  TrajectoryStepper stepper(model, dt);
  CVector v = psi.amplitudes();
  stepper.qsd_step(v, dxi);
  return StateVector(std::move(v));
}

StateVector homodyne_step(const LindbladModel& model, const StateVector& psi, std::span<const double> dw, double dt) {
  check_state(model, psi);
  TrajectoryStepper stepper(model, dt);
  CVector v = psi.amplitudes();
  stepper.homodyne_step(v, dw);
  return StateVector(std::move(v));
}

TrajectoryRecord jump_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg) {
  TrajectoryConfig jump_cfg = cfg;
  jump_cfg.method = Method::jump;
  check_state(model, psi0);
  NoiseStream noise(NoiseKind::uniform_jump, 1, cfg.dt, cfg.seed);
  return integrate(make_operators(model, jump_cfg), psi0, jump_cfg, noise);
}

TrajectoryRecord run_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg) {
  check_state(model, psi0);
  return stream_trajectory(make_operators(model, cfg), model, psi0, cfg);
}

TrajectoryRecord run_trajectory(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                                const NoisePath& noise) {
  if (noise.kind != noise_kind(cfg.method)) {
    throw InputError(std::string("method ") + to_string(cfg.method) + " needs " + to_string(noise_kind(cfg.method)) +
                     " noise, got " + to_string(noise.kind));
  }
  if (noise.channels != noise_channels(model, cfg.method)) {
    throw DimensionError("noise has " + std::to_string(noise.channels) + " channels, expected " +
                         std::to_string(noise_channels(model, cfg.method)));
  }
  if (noise.steps < cfg.steps()) {
    throw InputError("noise path is shorter than the trajectory");
  }
  if (std::abs(noise.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw InputError("noise dt does not match trajectory dt");
  }
  check_state(model, psi0);
  PathSource source(noise);
  return integrate(make_operators(model, cfg), psi0, cfg, source);
}

std::vector<TrajectoryRecord> run_ensemble(const LindbladModel& model, const StateVector& psi0,
                                           const TrajectoryConfig& cfg, std::int64_t n_traj,
                                           std::uint64_t master_seed, int workers) {
  check_ensemble_size(n_traj);
  check_state(model, psi0);
  const SharedOperators ops = make_operators(model, cfg);
  std::vector<TrajectoryRecord> records(static_cast<std::size_t>(n_traj));
  parallel_for(0, n_traj, workers, [&](std::int64_t i) {
    records[static_cast<std::size_t>(i)] =
        stream_trajectory(ops, model, psi0, with_seed(cfg, split_seed(master_seed, static_cast<std::uint64_t>(i))));
  });
  return records;
}

std::vector<TrajectoryRecord> run_ensemble_serial(const LindbladModel& model, const StateVector& psi0,
                                                  const TrajectoryConfig& cfg, std::int64_t n_traj,
                                                  std::uint64_t master_seed) {
  check_ensemble_size(n_traj);
  check_state(model, psi0);
  const SharedOperators ops = make_operators(model, cfg);
  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<std::size_t>(n_traj));
  for (std::int64_t i = 0; i < n_traj; ++i) {
    records.push_back(
        stream_trajectory(ops, model, psi0, with_seed(cfg, split_seed(master_seed, static_cast<std::uint64_t>(i)))));
  }
  return records;
}

EnsembleMean run_ensemble_mean(const LindbladModel& model, const StateVector& psi0, const TrajectoryConfig& cfg,
                               std::int64_t n_traj, std::uint64_t master_seed, int workers) {
  check_ensemble_size(n_traj);
  check_state(model, psi0);
  const SharedOperators ops = make_operators(model, cfg);
  std::vector<CMatrix> sums;
  EnsembleMean mean;
  std::vector<TrajectoryRecord> chunk;
  for (std::int64_t begin = 0; begin < n_traj; begin += kMeanChunk) {
    const std::int64_t end = std::min(n_traj, begin + kMeanChunk);
    chunk.assign(static_cast<std::size_t>(end - begin), TrajectoryRecord{});
    parallel_for(begin, end, workers, [&](std::int64_t i) {
      chunk[static_cast<std::size_t>(i - begin)] =
          stream_trajectory(ops, model, psi0, with_seed(cfg, split_seed(master_seed, static_cast<std::uint64_t>(i))));
    });
    if (sums.empty()) {
      mean.times = chunk.front().times;
      sums.assign(mean.times.size(), CMatrix::Zero(model.dim(), model.dim()));
    }
    for (const auto& rec : chunk) {
      for (std::size_t t = 0; t < sums.size(); ++t) {
        const CVector& a = rec.states[t].amplitudes();
        sums[t].noalias() += a * a.adjoint();
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(n_traj);
  mean.states.reserve(sums.size());
  for (auto& s : sums) {
    mean.states.push_back(DensityMatrix::assume_valid(0.5 * inv * (s + s.adjoint())));
  }
  return mean;
}

std::vector<PathwisePoint> compare_pathwise(const LindbladModel& model, const RepresentationTransform& transform,
                                            const StateVector& psi0, const TrajectoryConfig& cfg) {
  if (cfg.method == Method::jump) {
    throw InputError("compare_pathwise supports qsd and homodyne only");
  }
  const NoisePath noise = make_noise(noise_kind(cfg.method), cfg.steps(),
                                     static_cast<std::int64_t>(model.channels()), cfg.dt, cfg.seed);
  return compare_pathwise(model, transform, psi0, cfg, noise);
}

std::vector<PathwisePoint> compare_pathwise(const LindbladModel& model, const RepresentationTransform& transform,
                                            const StateVector& psi0, const TrajectoryConfig& cfg,
                                            const NoisePath& noise) {
  if (cfg.method == Method::jump) {
    throw InputError("compare_pathwise supports qsd and homodyne only");
  }
  check_state(model, psi0);
  if (noise.kind != noise_kind(cfg.method) || noise.channels != static_cast<std::int64_t>(model.channels())) {
    throw InputError("noise does not match method and channel count");
  }
  const std::int64_t steps = cfg.steps();
  if (noise.steps < steps || std::abs(noise.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw InputError("noise path does not cover the trajectory grid");
  }
  const LindbladModel other = apply_transform(model, transform);
  const NoisePath other_noise = cfg.method == Method::qsd ? transform_noise(transform, noise) : noise;

  TrajectoryStepper a(model, cfg.dt, cfg.scheme);
  TrajectoryStepper b(other, cfg.dt, cfg.scheme);
  CVector psi_a = psi0.amplitudes();
  CVector psi_b = psi0.amplitudes();

  std::vector<PathwisePoint> out;
  out.reserve(static_cast<std::size_t>(steps + 1));
  out.push_back({0.0, projector_distance(psi_a, psi_b)});
  for (std::int64_t s = 0; s < steps; ++s) {
    if (cfg.method == Method::qsd) {
      a.qsd_step(psi_a, noise.complex_row(s));
      b.qsd_step(psi_b, other_noise.complex_row(s));
    } else {
      a.homodyne_step(psi_a, noise.real_row(s));
      b.homodyne_step(psi_b, other_noise.real_row(s));
    }
    out.push_back({static_cast<double>(s + 1) * cfg.dt, projector_distance(psi_a, psi_b)});
  }
  return out;
}

}  // namespace qtraj
