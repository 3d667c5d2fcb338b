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

#ifndef TEVKIT_FORMATION_HPP
#define TEVKIT_FORMATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tevkit/events.hpp"
#include "tevkit/image.hpp"

namespace tevkit::formation
{
// Lower clamp on the blur factor E.
inline constexpr double kBlurFloor = 1e-3;

// Contrast threshold used to integrate events: one scalar for the whole
// sensor or one value per pixel.
class Contrast
{
public:
  static Contrast uniform(double c);
  static Contrast per_pixel(const Image & map);

  double at(std::size_t pixel) const { return map_.empty() ? scalar_ : map_[pixel]; }
  bool is_uniform() const { return map_.empty(); }
  // Throws ArgumentError unless the map matches the given geometry.
  void check(int width, int height) const;

private:
  double scalar_{0.0};
  std::vector<double> map_;
  int width_{0};
  int height_{0};
};

struct ExposureWindow
{
  int64_t start{0};
  int64_t end{0};
  int64_t duration() const { return end - start; }
  int64_t mid() const { return start + (end - start) / 2; }
};

struct BlurMap
{
  int width{0};
  int height{0};
  std::vector<double> e;

  Image to_image() const;
};

struct VarianceMap
{
  int width{0};
  int height{0};
  std::vector<double> v;

  Image to_image() const;
};

enum class AccumMode
{
  literal_sum,         // running sum of exp(c_k p_k)
  cumulative_product,  // running exp(sum c_k p_k)
};

// Per-pixel accumulator sequences, stored contiguously.
struct AccumSequence
{
  int width{0};
  int height{0};
  AccumMode mode{AccumMode::literal_sum};
  std::vector<uint32_t> offsets;
  std::vector<double> values;

  std::span<const double> pixel(std::size_t i) const
  {
    return {values.data() + offsets[i], values.data() + offsets[i + 1]};
  }
};

enum class BlurMode
{
  exact,  // piecewise-constant integral with breakpoints at event times
  grid,   // midpoint rule on n_samples uniform instants, for validation
};

// Per-pixel log ratio log(I^t / I^t_ref) predicted by the events: sum of
// c p over events in [min(t_ref, t), max(t_ref, t)), negated when t < t_ref.
Image event_integral(const EventStream & stream, const Contrast & c, int64_t t_ref, int64_t t);

// E = (1/T) * integral over the exposure of exp(event_integral(t_ref -> t)).
BlurMap blur_map(
  const EventStream & stream, const Contrast & c, const ExposureWindow & exposure, int64_t t_ref,
  int n_samples = 64, BlurMode mode = BlurMode::exact);

// Ridge solution of min ||turbulent - X * E||^2 + lambda ||X||^2 per pixel:
// X = turbulent * E / (E^2 + lambda). E is clamped to kBlurFloor when
// lambda > 0; with lambda == 0 any E below the floor is a NumericError.
Image edi_reconstruct(const Image & turbulent, const BlurMap & e, double lambda);
Image edi_reconstruct(
  const Image & turbulent, const EventStream & stream, const Contrast & c, const ExposureWindow & exposure,
  int64_t t_ref, double lambda);

// Forward model: image * E per pixel.
Image reblur(const Image & sharp, const BlurMap & e);

// Sharp latent at time t: the EDI reference scaled by exp(event_integral(t_ref -> t)).
Image latent_at(
  const Image & turbulent, const EventStream & stream, const Contrast & c, const ExposureWindow & exposure,
  int64_t t_ref, int64_t t, double lambda);

AccumSequence accumulate(const EventStream & stream, const Contrast & c, AccumMode mode = AccumMode::literal_sum);

// Population variance of each pixel's accumulator sequence; 0 when a
// pixel has fewer than two events.
Image raw_variance(const EventStream & stream, const Contrast & c, AccumMode mode = AccumMode::literal_sum);

// Robust min-max normalization to [0, 1] between the 1st and 99th
// percentiles of the whole map. A degenerate range maps to 0 everywhere.
VarianceMap normalize_variance(const Image & raw);

VarianceMap variance_map(const EventStream & stream, const Contrast & c, AccumMode mode = AccumMode::literal_sum);

}  // namespace tevkit::formation

#endif  // TEVKIT_FORMATION_HPP
