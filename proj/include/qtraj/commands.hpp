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

#include <ostream>
#include <string>
#include <string_view>

#include "qtraj/config.hpp"

namespace qtraj {

enum class Command { evolve_master, trajectory, ensemble, invariance_check, poincare };

/// Exit statuses. Errors surface as exceptions and map to kExitError in main.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBoundViolated = 2;

/// Shortest decimal that round-trips the double.
std::string format_double(double x);

/// Runs one subcommand, writing its files under cfg.out_path and a one-line
/// summary to `log`. `workers` <= 0 uses the OpenMP default; it never changes
/// the output bytes.
int run_command(Command command, const RunConfig& cfg, int workers, std::ostream& log);

}  // namespace qtraj
