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
#include <random>
#include <span>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/statespace.hpp"

namespace qtraj {

enum class NoiseKind { complex_wiener, real_wiener, uniform_jump };

const char* to_string(NoiseKind kind);

/// SplitMix64 finalizer. Constants from Steele, Lea and Flood.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Child seed for stream `index` of `parent`:
/// mix64(mix64(parent) ^ (0x9e3779b97f4a7c15 * (index + 1))).
/// Pure function of its arguments, so trajectory i gets the same stream no
/// matter which worker runs it.
constexpr std::uint64_t split_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
}

/// Increments are generated in blocks of this many steps; block b of a
/// stream is seeded with split_seed(stream_seed, b).
inline constexpr std::int64_t kNoiseBlockSteps = 1024;

/// Pregenerated noise for one trajectory, row-major steps x channels.
///
/// complex_wiener: d xi = sqrt(dt/2) (g1 + i g2), so M[d xi d xi^*] = dt, M[d xi^2] = 0.
/// real_wiener:    dW = sqrt(dt) g.
/// uniform_jump:   one U[0,1) draw per step and channel.
struct NoisePath {
  NoiseKind kind = NoiseKind::complex_wiener;
  std::int64_t steps = 0;
  std::int64_t channels = 0;
  double dt = 0.0;
  std::vector<Complex> complex_increments;
  std::vector<double> real_increments;

  std::span<const Complex> complex_row(std::int64_t step) const {
    return {complex_increments.data() + step * channels, static_cast<std::size_t>(channels)};
  }
  std::span<const double> real_row(std::int64_t step) const {
    return {real_increments.data() + step * channels, static_cast<std::size_t>(channels)};
  }
};

/// Sequential generator producing exactly the rows make_noise would, without
/// holding the whole path. Rows must be requested in non-decreasing order.
class NoiseStream {
 public:
  NoiseStream(NoiseKind kind, std::int64_t channels, double dt, std::uint64_t stream_seed);

  std::span<const Complex> complex_row(std::int64_t step);
  std::span<const double> real_row(std::int64_t step);

 private:
  void fill_block(std::int64_t block);

  NoiseKind kind_;
  std::int64_t channels_;
  double dt_;
  std::uint64_t seed_;
  std::int64_t block_ = -1;
  std::vector<Complex> complex_;
  std::vector<double> real_;
};

NoisePath make_noise(NoiseKind kind, std::int64_t steps, std::int64_t channels, double dt, std::uint64_t stream_seed);

/// Sums groups of `factor` consecutive increments: the same Brownian path on a
/// grid with step factor * dt. Not defined for uniform_jump noise.
NoisePath coarsen(const NoisePath& noise, std::int64_t factor);

/// d xi'_j = sum_k conj(u_jk) d xi_k per step; shifts leave noise unchanged.
NoisePath transform_noise(const RepresentationTransform& transform, const NoisePath& noise);

}  // namespace qtraj
