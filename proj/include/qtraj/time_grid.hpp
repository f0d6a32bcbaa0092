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

#include <cmath>
#include <cstdint>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

/// Number of fixed steps of size dt covering [0, t_final]. t_final must be an
/// integer multiple of dt to within 1e-9 relative.
inline std::int64_t step_count(double dt, double t_final) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InputError("dt must be positive and finite");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) {
    throw InputError("t_final must be positive and finite");
  }
  if (dt > t_final) {
    throw InputError("dt (" + std::to_string(dt) + ") must not exceed t_final (" + std::to_string(t_final) + ")");
  }
  const double ratio = t_final / dt;
  const auto steps = static_cast<std::int64_t>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio) {
    throw InputError("t_final must be an integer multiple of dt");
  }
  return steps;
}

/// Snapshots are taken at step 0, every record_every steps, and at the end.
inline bool is_recorded_step(std::int64_t step, std::int64_t total_steps, std::int64_t record_every) {
  return step % record_every == 0 || step == total_steps;
}

}  // namespace qtraj
