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

#include <span>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/statespace.hpp"
#include "qtraj/unravel.hpp"

namespace qtraj {

struct SeriesPoint {
  double time;
  Complex value;
};

/// <op> at every snapshot of the record.
std::vector<SeriesPoint> expectation_series(const TrajectoryRecord& rec, const OperatorMatrix& op);

/// Mean of |psi><psi| over the records at snapshot t_index, summed in record
/// order. All records must share one time grid.
DensityMatrix ensemble_mean_projector(std::span<const TrajectoryRecord> records, std::size_t t_index);

struct PoincarePoint {
  double x;
  double p;
};

struct PoincareSection {
  std::vector<PoincarePoint> points;
  std::vector<double> sample_times;
};

/// (<x>, <p>) at t = phase_offset + n * period for every such t inside the
/// record. The snapshot spacing must divide the period into an integer number
/// (>= 20) of samples and the record must span at least two periods.
PoincareSection poincare_sample(const TrajectoryRecord& rec, const DrivePeriod& period, const OperatorMatrix& x_op,
                                const OperatorMatrix& p_op);

}  // namespace qtraj
