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

#include "tevkit/image.hpp"

#include <cmath>
#include <string>

#include "tevkit/error.hpp"
#include "tevkit/threshold_model.hpp"

namespace tevkit
{
Image::Image(int w, int h, int c, double fill) : width(w), height(h), channels(c)
{
  if (w < 0 || h < 0) throw ArgumentError("image dimensions must be non-negative");
  if (c != 1 && c != 3) throw ArgumentError("image channels must be 1 or 3");
  data.assign(static_cast<std::size_t>(w) * h * c, fill);
}

void Image::validate() const
{
  if (channels != 1 && channels != 3) {
    throw ValidationError("image channels must be 1 or 3, got " + std::to_string(channels));
  }
  if (data.size() != pixel_count() * channels) {
    throw ValidationError("image sample count does not match its dimensions");
  }
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i]) || data[i] < 0.0) {
      throw ValidationError(
        "image sample " + std::to_string(i) + " is " + std::to_string(data[i]) +
        " (must be finite and >= 0)");
    }
  }
}

Image Image::channel(int c) const
{
  if (c < 0 || c >= channels) throw ArgumentError("channel index out of range");
  Image out(width, height, 1);
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    out.data[i] = data[i * channels + c];
  }
  return out;
}

void Image::set_channel(int c, const Image & plane)
{
  if (c < 0 || c >= channels || !same_size(plane) || plane.channels != 1) {
    throw ArgumentError("set_channel: plane does not fit");
  }
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    data[i * channels + c] = plane.data[i];
  }
}

Image Image::luminance() const
{
  if (channels == 1) return *this;
  Image out(width, height, 1);
  for (std::size_t i = 0; i < pixel_count(); ++i) {
    out.data[i] = 0.299 * data[3 * i] + 0.587 * data[3 * i + 1] + 0.114 * data[3 * i + 2];
  }
  return out;
}

void TiltFlow::validate() const
{
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (u.size() != n || v.size() != n) throw ValidationError("flow size does not match dimensions");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(v[i])) {
      throw ValidationError("flow contains a non-finite displacement");
    }
  }
}

void FrameSequence::validate() const
{
  if (frames.size() != timestamps.size()) {
    throw ValidationError("frame and timestamp counts differ");
  }
  if (exposure_end < exposure_start) throw ValidationError("exposure window is inverted");
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (frames[k].channels != 1) throw ValidationError("latent frames must be single-channel");
    if (!frames[k].same_size(frames.front())) throw ValidationError("latent frames differ in size");
    if (k > 0 && timestamps[k] <= timestamps[k - 1]) {
      throw ValidationError("latent timestamps must be strictly increasing");
    }
    if (timestamps[k] < exposure_start || timestamps[k] > exposure_end) {
      throw ValidationError("latent timestamp outside the exposure window");
    }
    frames[k].validate();
  }
}

void ThresholdModel::validate() const
{
  if (!(c_min > 0.0 && c_min <= c_mean && c_mean <= c_max)) {
    throw ValidationError("threshold model requires 0 < c_min <= c_mean <= c_max");
  }
  if (!(c_std >= 0.0) || !(temporal_jitter_std >= 0.0)) {
    throw ValidationError("threshold spreads must be non-negative");
  }
  if (refractory_us < 0 || !(noise_rate_hz >= 0.0)) {
    throw ValidationError("refractory period and noise rate must be non-negative");
  }
}

}  // namespace tevkit
