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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/statespace.hpp"
#include "qtraj/unravel.hpp"

namespace qtraj {

struct QubitDecaySpec {
  double gamma = 0.0;
  double rabi = 0.0;
  double detuning = 0.0;
};

struct DuffingSpec {
  Index fock_dim = 2;
  double kappa = 0.0;
  double anharmonicity = 0.0;
  double drive_amplitude = 0.0;
  double drive_detuning = 0.0;
};

struct ExplicitModelSpec {
  CMatrix hamiltonian;
  std::vector<CMatrix> lindblad_ops;
};

using ModelSpec = std::variant<QubitDecaySpec, DuffingSpec, ExplicitModelSpec>;

struct BasisStateSpec {
  Index index = 0;
};
struct AmplitudeStateSpec {
  CVector amplitudes;
};
struct CoherentStateSpec {
  Complex alpha;
};

using InitialStateSpec = std::variant<BasisStateSpec, AmplitudeStateSpec, CoherentStateSpec>;

enum class RunMethod { master, qsd, homodyne, jump };

struct TransformSpec {
  CMatrix mixing;
  CVector shifts;
};

struct StatesOutput {};

/// Named observable (sigma_x, sigma_y, sigma_z, number, x, p, identity) or an
/// explicit matrix under any name.
struct ObservableOutput {
  std::string name;
  std::optional<CMatrix> matrix;
};

/// period is optional for Duffing models (defaults to 2 pi / |drive_detuning|).
struct PoincareOutput {
  std::optional<double> period;
  double phase_offset = 0.0;
};

using OutputSpec = std::variant<StatesOutput, ObservableOutput, PoincareOutput>;

/// Fully validated run description. Built only by parse_config.
struct RunConfig {
  ModelSpec model;
  InitialStateSpec initial_state = BasisStateSpec{};
  RunMethod method = RunMethod::master;
  Scheme scheme = Scheme::euler;
  double dt = 0.0;
  double t_final = 0.0;
  std::int64_t record_every = 1;
  std::int64_t n_traj = 1;
  std::uint64_t master_seed = 0;
  std::optional<TransformSpec> transform;
  std::vector<OutputSpec> outputs;
  double invariance_constant = 10.0;
  std::string out_path = ".";
};

bool operator==(const RunConfig& a, const RunConfig& b);

/// Strict JSON: unknown keys, wrong types and failed cross-field checks all
/// throw ConfigError. Syntax errors report line and column; semantic errors
/// name the field.
RunConfig parse_config(std::string_view text);

/// Canonical JSON form; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& cfg);

const char* to_string(RunMethod method);

LindbladModel build_model(const ModelSpec& spec);
StateVector build_initial_state(const InitialStateSpec& spec, Index dim);
OperatorMatrix build_observable(const ObservableOutput& spec, Index dim);
Method trajectory_method(const RunConfig& cfg);
TrajectoryConfig trajectory_config(const RunConfig& cfg, std::uint64_t seed);

}  // namespace qtraj
