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

#ifndef TEVKIT_THRESHOLD_MODEL_HPP
#define TEVKIT_THRESHOLD_MODEL_HPP

#include <cstdint>

namespace tevkit
{
// Contrast threshold statistics of the simulated sensor, in log-intensity
// units. Each pixel draws a static base threshold from N(c_mean, c_std)
// clamped to [c_min, c_max]; every crossing then adds N(0, temporal_jitter_std).
struct ThresholdModel
{
  double c_mean{0.2};
  double c_std{0.03};
  double c_min{0.05};
  double c_max{0.5};
  double temporal_jitter_std{0.01};
  uint64_t seed{0};
  // Sensor non-idealities, off by default.
  int64_t refractory_us{0};
  double noise_rate_hz{0.0};

  void validate() const;

  // Noise-free sensor with a single threshold everywhere.
  static ThresholdModel constant(double c, uint64_t seed = 0)
  {
    ThresholdModel m;
    m.c_mean = c;
    m.c_std = 0.0;
    m.c_min = c;
    m.c_max = c;
    m.temporal_jitter_std = 0.0;
    m.seed = seed;
    return m;
  }
};

}  // namespace tevkit

#endif  // TEVKIT_THRESHOLD_MODEL_HPP
