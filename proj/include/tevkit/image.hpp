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

#ifndef TEVKIT_IMAGE_HPP
#define TEVKIT_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tevkit
{
// Linear-intensity raster, channel-interleaved, nominal range [0, 1].
//
// Samples are stored in double precision so that algebraic identities of the
// restoration chain (deblur followed by re-blur) hold well below float
// resolution. File I/O converts to 32-bit floats.
struct Image
{
  int width{0};
  int height{0};
  int channels{1};
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, int c = 1, double fill = 0.0);

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  std::size_t index(int x, int y, int c = 0) const
  {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double & at(int x, int y, int c = 0) { return data[index(x, y, c)]; }
  double at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }

  bool same_shape(const Image & o) const
  {
    return width == o.width && height == o.height && channels == o.channels;
  }
  bool same_size(const Image & o) const { return width == o.width && height == o.height; }

  // Throws ValidationError unless every sample is finite and non-negative.
  void validate() const;

  Image channel(int c) const;
  void set_channel(int c, const Image & plane);
  // Rec. 601 luma for 3-channel images, a copy for grayscale.
  Image luminance() const;
};

// Per-pixel 2D displacement, in pixels. u is horizontal, v vertical.
struct TiltFlow
{
  int width{0};
  int height{0};
  std::vector<double> u;
  std::vector<double> v;

  TiltFlow() = default;
  TiltFlow(int w, int h) : width(w), height(h), u(std::size_t(w) * h, 0.0), v(std::size_t(w) * h, 0.0) {}

  std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  void validate() const;
};

// Single-channel latent frames sampled inside one exposure window.
struct FrameSequence
{
  std::vector<Image> frames;
  std::vector<int64_t> timestamps;  // microseconds, strictly increasing
  int64_t exposure_start{0};
  int64_t exposure_end{0};

  void validate() const;
};

}  // namespace tevkit

#endif  // TEVKIT_IMAGE_HPP
