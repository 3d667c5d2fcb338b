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

#include "tevkit/scene.hpp"

#include <algorithm>
#include <cmath>

#include "tevkit/error.hpp"
#include "tevkit/turbsim.hpp"

namespace tevkit::bench
{
// Dead-leaves model: occluding discs with radius density ~ r^-3 painted
// front to back until the canvas is covered.
Image synth_scene(int width, int height, Rng & rng)
{
  if (width <= 0 || height <= 0) throw ArgumentError("synth_scene: empty size");
  const double r_min = 1.5;
  const double r_max = 40.0;
  const double lo = 0.08;
  const double hi = 0.92;
  Image img(width, height, 1);
  std::vector<char> covered(img.pixel_count(), 0);
  std::size_t remaining = covered.size();
  const double a = 1.0 / (r_min * r_min);
  const double b = 1.0 / (r_max * r_max);
  int guard = 0;
  while (remaining > 0 && guard < 2000000) {
    ++guard;
    // inverse CDF of p(r) ~ r^-3 on [r_min, r_max]
    const double r = 1.0 / std::sqrt(a - rng.uniform() * (a - b));
    const double cx = rng.uniform() * (width + 2 * r) - r;
    const double cy = rng.uniform() * (height + 2 * r) - r;
    const double level = lo + (hi - lo) * rng.uniform();
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const std::size_t i = img.index(x, y);
        if (covered[i]) continue;
        const double dx = x - cx;
        const double dy = y - cy;
        if (dx * dx + dy * dy > r * r) continue;
        covered[i] = 1;
        img.data[i] = level;
        --remaining;
      }
    }
  }
  img = turbsim::gaussian_blur(img, 0.7);
  for (double & v : img.data) v = std::clamp(v, 0.05, 0.95);
  return img;
}

Image center_crop(const Image & image, int width, int height)
{
  if (width > image.width || height > image.height || width <= 0 || height <= 0) {
    throw ArgumentError("center_crop: requested size exceeds the source image");
  }
  const int ox = (image.width - width) / 2;
  const int oy = (image.height - height) / 2;
  Image out(width, height, image.channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < image.channels; ++c) out.at(x, y, c) = image.at(x + ox, y + oy, c);
    }
  }
  return out;
}

}  // namespace tevkit::bench
