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

#include "qtraj/noise.hpp"

#include <cmath>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

const char* to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::complex_wiener:
      return "complex-wiener";
    case NoiseKind::real_wiener:
      return "real-wiener";
    case NoiseKind::uniform_jump:
      return "uniform-jump";
  }
  return "unknown";
}

NoiseStream::NoiseStream(NoiseKind kind, std::int64_t channels, double dt, std::uint64_t stream_seed)
    : kind_(kind), channels_(channels), dt_(dt), seed_(stream_seed) {
  if (channels < 0) {
    throw InputError("noise channel count must be >= 0");
  }
  if (!(dt > 0.0)) {
    throw InputError("noise dt must be positive");
  }
}

void NoiseStream::fill_block(std::int64_t block) {
  std::mt19937_64 engine(split_seed(seed_, static_cast<std::uint64_t>(block)));
  const std::size_t n = static_cast<std::size_t>(kNoiseBlockSteps * channels_);
  switch (kind_) {
    case NoiseKind::complex_wiener: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double scale = std::sqrt(0.5 * dt_);
      complex_.resize(n);
      for (auto& z : complex_) {
        const double re = gauss(engine);
        const double im = gauss(engine);
        z = scale * Complex(re, im);
      }
      break;
    }
    case NoiseKind::real_wiener: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double scale = std::sqrt(dt_);
      real_.resize(n);
      for (auto& x : real_) {
        x = scale * gauss(engine);
      }
      break;
    }
    case NoiseKind::uniform_jump: {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      real_.resize(n);
      for (auto& x : real_) {
        x = uniform(engine);
      }
      break;
    }
  }
  block_ = block;
}

std::span<const Complex> NoiseStream::complex_row(std::int64_t step) {
  if (kind_ != NoiseKind::complex_wiener) {
    throw InputError("complex_row requested from real-valued noise");
  }
  const std::int64_t block = step / kNoiseBlockSteps;
  if (block != block_) {
    fill_block(block);
  }
  const std::int64_t offset = (step % kNoiseBlockSteps) * channels_;
  return {complex_.data() + offset, static_cast<std::size_t>(channels_)};
}

std::span<const double> NoiseStream::real_row(std::int64_t step) {
  if (kind_ == NoiseKind::complex_wiener) {
    throw InputError("real_row requested from complex noise");
  }
  const std::int64_t block = step / kNoiseBlockSteps;
  if (block != block_) {
    fill_block(block);
  }
  const std::int64_t offset = (step % kNoiseBlockSteps) * channels_;
  return {real_.data() + offset, static_cast<std::size_t>(channels_)};
}

NoisePath make_noise(NoiseKind kind, std::int64_t steps, std::int64_t channels, double dt, std::uint64_t stream_seed) {
  if (steps < 0) {
    throw InputError("noise step count must be >= 0");
  }
  NoiseStream stream(kind, channels, dt, stream_seed);
  NoisePath path{kind, steps, channels, dt, {}, {}};
  if (kind == NoiseKind::complex_wiener) {
    path.complex_increments.reserve(static_cast<std::size_t>(steps * channels));
    for (std::int64_t s = 0; s < steps; ++s) {
      const auto row = stream.complex_row(s);
      path.complex_increments.insert(path.complex_increments.end(), row.begin(), row.end());
    }
  } else {
    path.real_increments.reserve(static_cast<std::size_t>(steps * channels));
    for (std::int64_t s = 0; s < steps; ++s) {
      const auto row = stream.real_row(s);
      path.real_increments.insert(path.real_increments.end(), row.begin(), row.end());
    }
  }
  return path;
}

NoisePath coarsen(const NoisePath& noise, std::int64_t factor) {
  if (factor < 1 || noise.steps % factor != 0) {
    throw InputError("coarsening factor must divide the step count");
  }
  if (noise.kind == NoiseKind::uniform_jump) {
    throw InputError("uniform-jump noise has no coarse-grained path");
  }
  NoisePath out{noise.kind, noise.steps / factor, noise.channels, noise.dt * static_cast<double>(factor), {}, {}};
  const auto k = static_cast<std::size_t>(noise.channels);
  if (noise.kind == NoiseKind::complex_wiener) {
    out.complex_increments.assign(static_cast<std::size_t>(out.steps) * k, Complex(0.0));
    for (std::int64_t s = 0; s < noise.steps; ++s) {
      const auto row = noise.complex_row(s);
      for (std::size_t c = 0; c < k; ++c) {
        out.complex_increments[static_cast<std::size_t>(s / factor) * k + c] += row[c];
      }
    }
  } else {
    out.real_increments.assign(static_cast<std::size_t>(out.steps) * k, 0.0);
    for (std::int64_t s = 0; s < noise.steps; ++s) {
      const auto row = noise.real_row(s);
      for (std::size_t c = 0; c < k; ++c) {
        out.real_increments[static_cast<std::size_t>(s / factor) * k + c] += row[c];
      }
    }
  }
  return out;
}

NoisePath transform_noise(const RepresentationTransform& transform, const NoisePath& noise) {
  if (noise.kind != NoiseKind::complex_wiener) {
    throw InputError(std::string("transform_noise needs complex-wiener noise, got ") + to_string(noise.kind));
  }
  if (static_cast<std::int64_t>(transform.channels()) != noise.channels) {
    throw DimensionError("transform has " + std::to_string(transform.channels()) + " channels, noise has " +
                         std::to_string(noise.channels));
  }
  const CMatrix mix = transform.mixing().conjugate();
  NoisePath out = noise;
  const Index k = static_cast<Index>(noise.channels);
  for (std::int64_t s = 0; s < noise.steps; ++s) {
    Eigen::Map<const CVector> in(noise.complex_increments.data() + s * k, k);
    Eigen::Map<CVector> dst(out.complex_increments.data() + s * k, k);
    dst.noalias() = mix * in;
  }
  return out;
}

}  // namespace qtraj
