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

#include "tevkit/evsim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tevkit/error.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/rng.hpp"

namespace tevkit::evsim
{
namespace
{
inline double log_intensity(double v) { return std::log(std::max(v, kLogFloor)); }

void check_latents(const FrameSequence & latents)
{
  if (latents.frames.size() < 2) throw ArgumentError("simulate_events: need at least 2 latent frames");
  latents.validate();
  if (latents.frames.front().width > 65535 || latents.frames.front().height > 65535) {
    throw ArgumentError("simulate_events: sensor larger than 65535 pixels per side");
  }
}

}  // namespace

Image sample_threshold_map(int width, int height, const ThresholdModel & model)
{
  model.validate();
  Image map(width, height, 1, model.c_mean);
  if (model.c_std > 0.0) {
    Rng rng(model.seed, 0);
    for (double & c : map.data) c = std::clamp(rng.normal(model.c_mean, model.c_std), model.c_min, model.c_max);
  }
  return map;
}

SimulatedEvents simulate_events(const FrameSequence & latents, const ThresholdModel & model)
{
  check_latents(latents);
  model.validate();
  const int w = latents.frames.front().width;
  const int h = latents.frames.front().height;
  const std::size_t n_frames = latents.frames.size();

  SimulatedEvents out;
  out.threshold_map = sample_threshold_map(w, h, model);
  out.c_mean = model.c_mean;
  out.c_std = model.c_std;
  out.seed = model.seed;
  out.stream.width = w;
  out.stream.height = h;

  std::vector<std::vector<Event>> per_row(h);
  parallel_rows(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      auto & row = per_row[y];
      for (int x = 0; x < w; ++x) {
        const std::size_t pix = static_cast<std::size_t>(y) * w + x;
        Rng rng(model.seed, 1 + pix);
        const double c_base = out.threshold_map.data[pix];
        const bool jitter = model.temporal_jitter_std > 0.0;
        auto draw = [&] {
          return jitter ? std::clamp(c_base + model.temporal_jitter_std * rng.normal(), model.c_min, model.c_max)
                        : c_base;
        };
        double c_pending = draw();
        double l_ref = log_intensity(latents.frames[0].data[pix]);
        int64_t last_t = 0;
        bool has_last = false;
        for (std::size_t k = 0; k + 1 < n_frames; ++k) {
          const double l0 = log_intensity(latents.frames[k].data[pix]);
          const double l1 = log_intensity(latents.frames[k + 1].data[pix]);
          if (l1 == l0) continue;
          const double s = l1 > l0 ? 1.0 : -1.0;
          const double t0 = static_cast<double>(latents.timestamps[k]);
          const double dt = static_cast<double>(latents.timestamps[k + 1]) - t0;
          double prev_level = l0 - s * model.c_min;
          for (;;) {
            // crossing level in the direction of travel, never behind l0 and
            // at least c_min past the previous crossing of this step
            double level = l_ref + s * c_pending;
            if (s > 0) {
              level = std::max({level, l0, prev_level + model.c_min});
              if (!(l1 > level)) break;
            } else {
              level = std::min({level, l0, prev_level - model.c_min});
              if (!(l1 < level)) break;
            }
            const double frac = (level - l0) / (l1 - l0);
            const int64_t t = std::llround(t0 + frac * dt);
            l_ref += s * c_base;
            prev_level = level;
            c_pending = draw();
            if (model.refractory_us > 0 && has_last && t - last_t < model.refractory_us) continue;
            row.push_back(Event{t, static_cast<uint16_t>(x), static_cast<uint16_t>(y), static_cast<int8_t>(s)});
            last_t = t;
            has_last = true;
          }
        }
        if (model.noise_rate_hz > 0.0) {
          // background activity: Poisson arrivals with random polarity
          const double span_s = (latents.timestamps.back() - latents.timestamps.front()) * 1e-6;
          double t_s = 0.0;
          for (;;) {
            t_s += -std::log(rng.uniform_open0()) / model.noise_rate_hz;
            if (t_s >= span_s) break;
            const int8_t p = rng.uniform() < 0.5 ? -1 : 1;
            row.push_back(Event{
              latents.timestamps.front() + static_cast<int64_t>(t_s * 1e6), static_cast<uint16_t>(x),
              static_cast<uint16_t>(y), p});
          }
        }
      }
    }
  });

  std::size_t total = 0;
  for (const auto & row : per_row) total += row.size();
  out.stream.events.reserve(total);
  for (auto & row : per_row) {
    out.stream.events.insert(out.stream.events.end(), row.begin(), row.end());
  }
  out.stream.canonicalize();
  return out;
}

uint64_t event_count_bound(const FrameSequence & latents, double c_min)
{
  if (!(c_min > 0.0)) throw ArgumentError("event_count_bound: c_min must be > 0");
  uint64_t bound = 0;
  for (std::size_t k = 0; k + 1 < latents.frames.size(); ++k) {
    const auto & a = latents.frames[k].data;
    const auto & b = latents.frames[k + 1].data;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = std::abs(log_intensity(b[i]) - log_intensity(a[i]));
      bound += static_cast<uint64_t>(std::ceil(d / c_min));
    }
  }
  return bound;
}

}  // namespace tevkit::evsim
