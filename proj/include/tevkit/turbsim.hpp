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

#ifndef TEVKIT_TURBSIM_HPP
#define TEVKIT_TURBSIM_HPP

#include <cstdint>
#include <vector>

#include "tevkit/image.hpp"
#include "tevkit/rng.hpp"

namespace tevkit::turbsim
{
// Statistical turbulence model: Gaussian-correlated tilt fields evolving as
// an AR(1) process across latent frames, a per-latent Gaussian blur and
// additive Gaussian read noise on the long exposure.
struct TurbulenceParams
{
  double sigma_tilt{1.5};   // marginal tilt std, pixels
  double rho{16.0};         // spatial correlation length, pixels
  double tau_corr{0.5};     // AR(1) coefficient per latent step
  double sigma_blur0{0.5};  // per-latent blur std, pixels
  double sigma_noise{0.01};
  int n_latents{12};
  double fps_latent{120.0};
  bool zero_mean_tilt{true};
  uint64_t seed{0};

  void validate() const;

  // Latent k sits at the centre of its slot: round((k + 1/2) * 1e6 / fps).
  int64_t latent_timestamp(int k) const;
  int64_t exposure_start() const { return 0; }
  int64_t exposure_end() const;
  int reference_index() const { return n_latents / 2; }
};

// Independent Gaussian random fields for u and v with correlation
// exp(-d^2 / (2 rho^2)) and marginal std sigma_tilt. White noise is drawn
// on a padded grid so the filtered field is stationary up to the border.
TiltFlow gen_tilt_field(int width, int height, double sigma_tilt, double rho, Rng & rng);

std::vector<TiltFlow> gen_tilt_sequence(const TurbulenceParams & params, int width, int height, Rng & rng);

// Backward bilinear warp with border clamp: out(x, y) = in(x + u, y + v).
Image apply_tilt(const Image & image, const TiltFlow & flow);

// Spatially varying Gaussian blur. Each output pixel uses a normalized
// square kernel of std sigma_field(x, y) truncated at ceil(3 sigma); zero
// sigma passes the pixel through. Constant fields take the separable path.
Image apply_blur(const Image & image, const Image & sigma_field);

// Separable Gaussian blur with clamped borders.
Image gaussian_blur(const Image & image, double sigma);

// Flow g with g(x) = -f(x + g(x)), i.e. warping by g undoes warping by f.
TiltFlow invert_flow(const TiltFlow & flow, int iterations = 20);

struct TurbulentRender
{
  Image turbulent;
  FrameSequence latents;  // luminance of each latent, the event sensor input
  std::vector<TiltFlow> tilts;
  TiltFlow tilt_ref;
  int reference_index{0};
  double sigma_noise_used{0.0};
};

// Long exposure as the average of blurred, tilted latents plus noise,
// clamped to [0, 1]. Color inputs share one tilt sequence across channels.
TurbulentRender render_turbulent(const Image & clean, const TurbulenceParams & params, Rng & rng);

}  // namespace tevkit::turbsim

#endif  // TEVKIT_TURBSIM_HPP
