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

#include "qtraj/analysis.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

bool near_integer(double x, double tol = 1e-9) { return std::abs(x - std::round(x)) <= tol * std::max(1.0, x); }

}  // namespace

std::vector<SeriesPoint> expectation_series(const TrajectoryRecord& rec, const OperatorMatrix& op) {
  std::vector<SeriesPoint> out;
  out.reserve(rec.states.size());
  for (std::size_t i = 0; i < rec.states.size(); ++i) {
    out.push_back({rec.times[i], expectation(op, rec.states[i])});
  }
  return out;
}

DensityMatrix ensemble_mean_projector(std::span<const TrajectoryRecord> records, std::size_t t_index) {
  if (records.empty()) {
    throw InputError("ensemble_mean_projector needs at least one record");
  }
  const auto& first = records.front();
  if (t_index >= first.states.size()) {
    throw InputError("snapshot index " + std::to_string(t_index) + " out of range");
  }
  const Index dim = first.states[t_index].dim();
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& rec : records) {
    if (rec.times.size() != first.times.size() || rec.times[t_index] != first.times[t_index]) {
      throw InputError("records do not share a time grid");
    }
    const CVector& a = rec.states[t_index].amplitudes();
    if (a.size() != dim) {
      throw DimensionError("records have different dimensions");
    }
    sum.noalias() += a * a.adjoint();
  }
  sum /= static_cast<double>(records.size());
  return DensityMatrix::assume_valid(0.5 * (sum + sum.adjoint()));
}

PoincareSection poincare_sample(const TrajectoryRecord& rec, const DrivePeriod& period, const OperatorMatrix& x_op,
                                const OperatorMatrix& p_op) {
  if (rec.times.size() < 2) {
    throw InputError("record needs at least two snapshots");
  }
  const double spacing = rec.times[1] - rec.times[0];
  const double per_period = period.period / spacing;
  if (!near_integer(per_period) || std::llround(per_period) < 20) {
    std::ostringstream msg;
    msg << "snapshot spacing " << spacing << " does not resolve period " << period.period
        << " (need period / (dt * record_every) to be an integer >= 20; e.g. dt * record_every = "
        << period.period / std::max(20.0, std::ceil(per_period)) << ")";
    throw InputError(msg.str());
  }
  const double offset_steps = period.phase_offset / spacing;
  if (!near_integer(offset_steps)) {
    throw InputError("phase offset is not on the snapshot grid");
  }
  const double duration = rec.times.back() - rec.times.front();
  if (duration + 1e-9 * period.period < 2.0 * period.period) {
    throw InputError("record must span at least two drive periods");
  }

  const auto stride = std::llround(per_period);
  const auto start = std::llround(offset_steps);
  PoincareSection section;
  for (auto idx = static_cast<std::int64_t>(start); idx < static_cast<std::int64_t>(rec.times.size()); idx += stride) {
    const double expected = static_cast<double>(idx) * spacing + rec.times.front();
    if (std::abs(rec.times[static_cast<std::size_t>(idx)] - expected) > 1e-9 * std::max(1.0, expected)) {
      break;  // trailing off-grid final snapshot
    }
    const auto& psi = rec.states[static_cast<std::size_t>(idx)];
    section.points.push_back({expectation(x_op, psi).real(), expectation(p_op, psi).real()});
    section.sample_times.push_back(rec.times[static_cast<std::size_t>(idx)]);
  }
  return section;
}

}  // namespace qtraj
