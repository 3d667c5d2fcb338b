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

#include "tevkit/turbsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tevkit/error.hpp"
#include "tevkit/parallel.hpp"

namespace tevkit::turbsim
{
namespace
{
std::vector<double> gaussian_kernel(double sigma, int radius)
{
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + radius];
  }
  for (double & w : k) w /= sum;
  return k;
}

inline int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

// Valid-mode separable filtering of a (w + 2r) x (h + 2r) grid down to w x h.
std::vector<double> filter_valid(
  const std::vector<double> & padded, int w, int h, int r, const std::vector<double> & k)
{
  const int pw = w + 2 * r;
  const int ph = h + 2 * r;
  std::vector<double> tmp(static_cast<std::size_t>(w) * ph);
  parallel_rows(ph, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      const double * src = &padded[static_cast<std::size_t>(y) * pw];
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i <= 2 * r; ++i) acc += k[i] * src[x + i];
        tmp[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  });
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  parallel_rows(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = 0; i <= 2 * r; ++i) acc += k[i] * tmp[static_cast<std::size_t>(y + i) * w + x];
        out[static_cast<std::size_t>(y) * w + x] = acc;
      }
    }
  });
  return out;
}

}  // namespace

void TurbulenceParams::validate() const
{
  if (!(sigma_tilt >= 0.0)) throw ValidationError("sigma_tilt must be >= 0");
  if (!(rho > 0.0)) throw ValidationError("rho must be > 0");
  if (!(tau_corr >= 0.0 && tau_corr < 1.0)) throw ValidationError("tau_corr must lie in [0, 1)");
  if (!(sigma_blur0 >= 0.0)) throw ValidationError("sigma_blur0 must be >= 0");
  if (!(sigma_noise >= 0.0)) throw ValidationError("sigma_noise must be >= 0");
  if (n_latents < 2) throw ArgumentError("n_latents must be >= 2");
  if (!(fps_latent > 0.0)) throw ValidationError("fps_latent must be > 0");
}

int64_t TurbulenceParams::latent_timestamp(int k) const
{
  return std::llround((k + 0.5) * 1e6 / fps_latent);
}

int64_t TurbulenceParams::exposure_end() const { return std::llround(n_latents * 1e6 / fps_latent); }

TiltFlow gen_tilt_field(int width, int height, double sigma_tilt, double rho, Rng & rng)
{
  if (!(rho > 0.0)) throw ArgumentError("gen_tilt_field: rho must be > 0");
  if (!(sigma_tilt >= 0.0)) throw ArgumentError("gen_tilt_field: sigma_tilt must be >= 0");
  if (width <= 0 || height <= 0) throw ArgumentError("gen_tilt_field: empty grid");
  TiltFlow f(width, height);
  if (sigma_tilt == 0.0) return f;

  // A kernel of std rho/sqrt(2) convolved with itself gives a Gaussian
  // correlation of std rho.
  const double ks = rho / std::sqrt(2.0);
  const int r = static_cast<int>(std::ceil(3.0 * ks));
  const auto k = gaussian_kernel(ks, r);
  double k2 = 0.0;
  for (double w : k) k2 += w * w;
  const double gain = sigma_tilt / k2;  // marginal std of the 2D filter is sum(k^2)

  const std::size_t n_pad = static_cast<std::size_t>(width + 2 * r) * (height + 2 * r);
  for (auto * comp : {&f.u, &f.v}) {
    std::vector<double> noise(n_pad);
    for (double & z : noise) z = rng.normal();
    *comp = filter_valid(noise, width, height, r, k);
    for (double & z : *comp) z *= gain;
  }
  return f;
}

std::vector<TiltFlow> gen_tilt_sequence(const TurbulenceParams & params, int width, int height, Rng & rng)
{
  params.validate();
  const double a = params.tau_corr;
  const double b = std::sqrt(1.0 - a * a);
  std::vector<TiltFlow> seq;
  seq.reserve(params.n_latents);
  seq.push_back(gen_tilt_field(width, height, params.sigma_tilt, params.rho, rng));
  for (int k = 1; k < params.n_latents; ++k) {
    TiltFlow next = gen_tilt_field(width, height, params.sigma_tilt, params.rho, rng);
    const TiltFlow & prev = seq.back();
    for (std::size_t i = 0; i < next.u.size(); ++i) {
      next.u[i] = a * prev.u[i] + b * next.u[i];
      next.v[i] = a * prev.v[i] + b * next.v[i];
    }
    seq.push_back(std::move(next));
  }
  if (params.zero_mean_tilt) {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    for (std::size_t i = 0; i < n; ++i) {
      double mu = 0.0;
      double mv = 0.0;
      for (const auto & f : seq) {
        mu += f.u[i];
        mv += f.v[i];
      }
      mu /= params.n_latents;
      mv /= params.n_latents;
      for (auto & f : seq) {
        f.u[i] -= mu;
        f.v[i] -= mv;
      }
    }
  }
  return seq;
}

Image apply_tilt(const Image & image, const TiltFlow & flow)
{
  if (image.width != flow.width || image.height != flow.height) {
    throw ArgumentError("apply_tilt: flow and image dimensions differ");
  }
  Image out(image.width, image.height, image.channels);
  const int w = image.width;
  const int h = image.height;
  const int nc = image.channels;
  parallel_rows(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t i = flow.index(x, y);
        const double sx = std::clamp(x + flow.u[i], 0.0, double(w - 1));
        const double sy = std::clamp(y + flow.v[i], 0.0, double(h - 1));
        const int x0 = static_cast<int>(sx);
        const int y0i = static_cast<int>(sy);
        const int x1 = std::min(x0 + 1, w - 1);
        const int y1i = std::min(y0i + 1, h - 1);
        const double fx = sx - x0;
        const double fy = sy - y0i;
        for (int c = 0; c < nc; ++c) {
          const double top = (1.0 - fx) * image.at(x0, y0i, c) + fx * image.at(x1, y0i, c);
          const double bot = (1.0 - fx) * image.at(x0, y1i, c) + fx * image.at(x1, y1i, c);
          out.at(x, y, c) = (1.0 - fy) * top + fy * bot;
        }
      }
    }
  });
  return out;
}

Image gaussian_blur(const Image & image, double sigma)
{
  if (!(sigma >= 0.0)) throw ValidationError("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return image;
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  const auto k = gaussian_kernel(sigma, r);
  const int w = image.width;
  const int h = image.height;
  const int nc = image.channels;
  Image tmp(w, h, nc);
  parallel_rows(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < nc; ++c) {
          double acc = 0.0;
          for (int i = -r; i <= r; ++i) acc += k[i + r] * image.at(clampi(x + i, 0, w - 1), y, c);
          tmp.at(x, y, c) = acc;
        }
      }
    }
  });
  Image out(w, h, nc);
  parallel_rows(h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < nc; ++c) {
          double acc = 0.0;
          for (int i = -r; i <= r; ++i) acc += k[i + r] * tmp.at(x, clampi(y + i, 0, h - 1), c);
          out.at(x, y, c) = acc;
        }
      }
    }
  });
  return out;
}

Image apply_blur(const Image & image, const Image & sigma_field)
{
  if (sigma_field.channels != 1 || !sigma_field.same_size(image)) {
    throw ArgumentError("apply_blur: sigma field must be single-channel and match the image");
  }
  for (double s : sigma_field.data) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ValidationError("apply_blur: negative or non-finite sigma");
  }
  if (sigma_field.data.empty()) return image;
  const auto [lo, hi] = std::minmax_element(sigma_field.data.begin(), sigma_field.data.end());
  if (*lo == *hi) return gaussian_blur(image, *lo);

  const int w = image.width;
  const int h = image.height;
  const int nc = image.channels;
  Image out(w, h, nc);
  parallel_rows(h, [&](int y0, int y1) {
    std::vector<double> acc(nc);
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        const double s = sigma_field.at(x, y);
        if (s == 0.0) {
          for (int c = 0; c < nc; ++c) out.at(x, y, c) = image.at(x, y, c);
          continue;
        }
        const int r = static_cast<int>(std::ceil(3.0 * s));
        const double inv = -0.5 / (s * s);
        std::fill(acc.begin(), acc.end(), 0.0);
        double norm = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          const int yy = clampi(y + dy, 0, h - 1);
          for (int dx = -r; dx <= r; ++dx) {
            const double wgt = std::exp(inv * (dx * dx + dy * dy));
            const int xx = clampi(x + dx, 0, w - 1);
            norm += wgt;
            for (int c = 0; c < nc; ++c) acc[c] += wgt * image.at(xx, yy, c);
          }
        }
        for (int c = 0; c < nc; ++c) out.at(x, y, c) = acc[c] / norm;
      }
    }
  });
  return out;
}

TiltFlow invert_flow(const TiltFlow & flow, int iterations)
{
  flow.validate();
  const int w = flow.width;
  const int h = flow.height;
  TiltFlow g(w, h);
  for (std::size_t i = 0; i < g.u.size(); ++i) {
    g.u[i] = -flow.u[i];
    g.v[i] = -flow.v[i];
  }
  auto sample = [&](const std::vector<double> & f, double sx, double sy) {
    sx = std::clamp(sx, 0.0, double(w - 1));
    sy = std::clamp(sy, 0.0, double(h - 1));
    const int x0 = static_cast<int>(sx);
    const int y0 = static_cast<int>(sy);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = sx - x0;
    const double fy = sy - y0;
    const double top = (1 - fx) * f[flow.index(x0, y0)] + fx * f[flow.index(x1, y0)];
    const double bot = (1 - fx) * f[flow.index(x0, y1)] + fx * f[flow.index(x1, y1)];
    return (1 - fy) * top + fy * bot;
  };
  for (int it = 1; it < iterations; ++it) {
    TiltFlow next(w, h);
    parallel_rows(h, [&](int y0, int y1) {
      for (int y = y0; y < y1; ++y) {
        for (int x = 0; x < w; ++x) {
          const std::size_t i = g.index(x, y);
          next.u[i] = -sample(flow.u, x + g.u[i], y + g.v[i]);
          next.v[i] = -sample(flow.v, x + g.u[i], y + g.v[i]);
        }
      }
    });
    g = std::move(next);
  }
  return g;
}

TurbulentRender render_turbulent(const Image & clean, const TurbulenceParams & params, Rng & rng)
{
  params.validate();
  clean.validate();
  const int w = clean.width;
  const int h = clean.height;
  const int nc = clean.channels;
  const int n = params.n_latents;

  TurbulentRender r;
  r.tilts = gen_tilt_sequence(params, w, h, rng);
  r.reference_index = params.reference_index();
  r.tilt_ref = r.tilts[r.reference_index];
  r.latents.exposure_start = params.exposure_start();
  r.latents.exposure_end = params.exposure_end();

  std::vector<double> sum(clean.data.size(), 0.0);
  std::vector<double> lo(clean.data.size(), std::numeric_limits<double>::infinity());
  std::vector<double> hi(clean.data.size(), -std::numeric_limits<double>::infinity());
  for (int k = 0; k < n; ++k) {
    const Image latent = gaussian_blur(apply_tilt(clean, r.tilts[k]), params.sigma_blur0);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      const double v = latent.data[i];
      sum[i] += v;
      lo[i] = std::min(lo[i], v);
      hi[i] = std::max(hi[i], v);
    }
    r.latents.frames.push_back(latent.luminance());
    r.latents.timestamps.push_back(params.latent_timestamp(k));
  }

  r.turbulent = Image(w, h, nc);
  for (std::size_t i = 0; i < sum.size(); ++i) {
    // identical samples average to themselves exactly
    r.turbulent.data[i] = lo[i] == hi[i] ? lo[i] : sum[i] / n;
  }
  r.sigma_noise_used = params.sigma_noise;
  if (params.sigma_noise > 0.0) {
    for (double & v : r.turbulent.data) v += params.sigma_noise * rng.normal();
  }
  for (double & v : r.turbulent.data) v = std::clamp(v, 0.0, 1.0);
  return r;
}

}  // namespace tevkit::turbsim
