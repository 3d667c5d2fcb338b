// -*-c++-*---------------------------------------------------------------------------------------
// Copyright 2026 The tevkit Authors
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

#ifndef TEVKIT_EVSIM_HPP
#define TEVKIT_EVSIM_HPP

#include <cstdint>

#include "tevkit/events.hpp"
#include "tevkit/image.hpp"
#include "tevkit/threshold_model.hpp"

namespace tevkit::evsim
{
// Floor applied before taking log intensity.
inline constexpr double kLogFloor = 1e-4;

struct SimulatedEvents
{
  EventStream stream;
  Image threshold_map;  // per-pixel base threshold
  double c_mean{0.0};
  double c_std{0.0};
  uint64_t seed{0};
};

// Per-pixel base thresholds: N(c_mean, c_std) clamped to [c_min, c_max],
// drawn in raster order from Rng(seed, 0).
Image sample_threshold_map(int width, int height, const ThresholdModel & model);

// Emits events from a latent sequence.
//
// Log intensity is interpolated linearly in time between frames. A pixel
// fires whenever the interpolant crosses its reference level by the
// current (jittered) threshold; the reference then moves by the pixel's
// base threshold so the constant-c integral never drifts more than one
// threshold from the true log intensity. Within one frame step successive
// crossing levels are at least c_min apart, which keeps the count below
// event_count_bound. Per-pixel randomness comes from Rng(seed, 1 + pixel),
// so output is independent of the worker count.
SimulatedEvents simulate_events(const FrameSequence & latents, const ThresholdModel & model);

// Sum over pixels and steps of ceil(|delta log I| / c_min). Upper bound on
// the signal events simulate_events can produce (background noise events
// are not covered).
uint64_t event_count_bound(const FrameSequence & latents, double c_min);

}  // namespace tevkit::evsim

#endif  // TEVKIT_EVSIM_HPP
