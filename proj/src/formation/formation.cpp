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

#include "tevkit/formation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tevkit/error.hpp"
#include "tevkit/parallel.hpp"

namespace tevkit::formation
{
Contrast Contrast::uniform(double c)
{
  if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("contrast threshold must be > 0");
  Contrast out;
  out.scalar_ = c;
  return out;
}

Contrast Contrast::per_pixel(const Image & map)
{
  if (map.channels != 1) throw ArgumentError("contrast map must be single-channel");
  for (double c : map.data) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("contrast map values must be > 0");
  }
  Contrast out;
  out.map_ = map.data;
  out.width_ = map.width;
  out.height_ = map.height;
  return out;
}

void Contrast::check(int width, int height) const
{
  if (!map_.empty() && (width_ != width || height_ != height)) {
    throw ArgumentError("contrast map does not match the sensor geometry");
  }
}

Image BlurMap::to_image() const
{
  Image img(width, height, 1);
  img.data = e;
  return img;
}

Image VarianceMap::to_image() const
{
  Image img(width, height, 1);
  img.data = v;
  return img;
}

namespace
{
// Index range of events with t in [t0, t1) in a canonical stream.
std::pair<std::size_t, std::size_t> time_range(const EventStream & s, int64_t t0, int64_t t1)
{
  auto cmp = [](const Event & e, int64_t t) { return e.t < t; };
  auto lo = std::lower_bound(s.events.begin(), s.events.end(), t0, cmp);
  auto hi = std::lower_bound(lo, s.events.end(), t1, cmp);
  return {static_cast<std::size_t>(lo - s.events.begin()), static_cast<std::size_t>(hi - s.events.begin())};
}

void check_stream(const EventStream & stream, const Contrast & c)
{
  if (!stream.is_canonical()) throw ArgumentError("event stream must be in canonical order");
  c.check(stream.width, stream.height);
}

}  // namespace

Image event_integral(const EventStream & stream, const Contrast & c, int64_t t_ref, int64_t t)
{
  check_stream(stream, c);
  Image out(stream.width, stream.height, 1);
  const auto [lo, hi] = time_range(stream, std::min(t_ref, t), std::max(t_ref, t));
  const double sign = t < t_ref ? -1.0 : 1.0;
  const int w = stream.width;
  for (std::size_t k = lo; k < hi; ++k) {
    const Event & e = stream.events[k];
    const std::size_t pix = static_cast<std::size_t>(e.y) * w + e.x;
    out.data[pix] += sign * c.at(pix) * e.p;
  }
  return out;
}

BlurMap blur_map(
  const EventStream & stream, const Contrast & c, const ExposureWindow & exposure, int64_t t_ref, int n_samples,
  BlurMode mode)
{
  check_stream(stream, c);
  if (exposure.end <= exposure.start) throw ArgumentError("blur_map: empty exposure window");
  if (t_ref < exposure.start || t_ref > exposure.end) {
    throw ArgumentError("blur_map: t_ref lies outside the exposure window");
  }
  if (mode == BlurMode::grid && n_samples < 2) throw ArgumentError("blur_map: n_samples must be >= 2");

  const auto [lo, hi] = time_range(stream, exposure.start, exposure.end);
  EventStream window{stream.width, stream.height, {}};
  window.events.assign(stream.events.begin() + lo, stream.events.begin() + hi);
  const PixelIndex idx = PixelIndex::build(window);

  BlurMap out{stream.width, stream.height, std::vector<double>(std::size_t(stream.width) * stream.height, 1.0)};
  const double ts = static_cast<double>(exposure.start);
  const double te = static_cast<double>(exposure.end);
  const double span = te - ts;

  parallel_rows(stream.height, [&](int y0, int y1) {
    for (std::size_t pix = std::size_t(y0) * stream.width; pix < std::size_t(y1) * stream.width; ++pix) {
      const uint32_t b = idx.offsets[pix];
      const uint32_t n = idx.offsets[pix + 1] - b;
      if (n == 0) continue;
      const double cp = c.at(pix);
      // level at t_ref relative to the start of the window
      double s_ref = 0.0;
      for (uint32_t k = 0; k < n; ++k) {
        const Event & e = window.events[idx.order[b + k]];
        if (e.t >= t_ref) break;
        s_ref += cp * e.p;
      }
      if (mode == BlurMode::exact) {
        double s = -s_ref;
        double prev = ts;
        double acc = 0.0;
        for (uint32_t k = 0; k < n; ++k) {
          const Event & e = window.events[idx.order[b + k]];
          acc += std::exp(s) * (static_cast<double>(e.t) - prev);
          prev = static_cast<double>(e.t);
          s += cp * e.p;
        }
        acc += std::exp(s) * (te - prev);
        out.e[pix] = acc / span;
      } else {
        double s = -s_ref;
        uint32_t k = 0;
        double acc = 0.0;
        for (int i = 0; i < n_samples; ++i) {
          const double t = ts + (i + 0.5) * span / n_samples;
          while (k < n && static_cast<double>(window.events[idx.order[b + k]].t) < t) {
            s += cp * window.events[idx.order[b + k]].p;
            ++k;
          }
          acc += std::exp(s);
        }
        out.e[pix] = acc / n_samples;
      }
    }
  });
  return out;
}

Image edi_reconstruct(const Image & turbulent, const BlurMap & e, double lambda)
{
  if (!(lambda >= 0.0)) throw ArgumentError("edi_reconstruct: lambda must be >= 0");
  if (turbulent.width != e.width || turbulent.height != e.height) {
    throw ArgumentError("edi_reconstruct: blur map and image dimensions differ");
  }
  Image out(turbulent.width, turbulent.height, turbulent.channels);
  const int nc = turbulent.channels;
  for (std::size_t pix = 0; pix < e.e.size(); ++pix) {
    double ev = e.e[pix];
    if (!std::isfinite(ev) || !(ev > 0.0)) throw NumericError("edi_reconstruct: non-positive blur factor");
    if (lambda == 0.0) {
      if (ev < kBlurFloor) {
        throw NumericError(
          "edi_reconstruct: blur factor " + std::to_string(ev) + " below floor at pixel " + std::to_string(pix) +
          " with lambda = 0");
      }
      for (int ch = 0; ch < nc; ++ch) out.data[pix * nc + ch] = turbulent.data[pix * nc + ch] / ev;
    } else {
      ev = std::max(ev, kBlurFloor);
      const double gain = ev / (ev * ev + lambda);
      for (int ch = 0; ch < nc; ++ch) out.data[pix * nc + ch] = turbulent.data[pix * nc + ch] * gain;
    }
  }
  return out;
}

Image edi_reconstruct(
  const Image & turbulent, const EventStream & stream, const Contrast & c, const ExposureWindow & exposure,
  int64_t t_ref, double lambda)
{
  return edi_reconstruct(turbulent, blur_map(stream, c, exposure, t_ref), lambda);
}

Image reblur(const Image & sharp, const BlurMap & e)
{
  if (sharp.width != e.width || sharp.height != e.height) throw ArgumentError("reblur: dimensions differ");
  Image out = sharp;
  const int nc = sharp.channels;
  for (std::size_t pix = 0; pix < e.e.size(); ++pix) {
    for (int ch = 0; ch < nc; ++ch) out.data[pix * nc + ch] *= e.e[pix];
  }
  return out;
}

Image latent_at(
  const Image & turbulent, const EventStream & stream, const Contrast & c, const ExposureWindow & exposure,
  int64_t t_ref, int64_t t, double lambda)
{
  Image out = edi_reconstruct(turbulent, stream, c, exposure, t_ref, lambda);
  if (t == t_ref) return out;
  const Image li = event_integral(stream, c, t_ref, t);
  const int nc = out.channels;
  for (std::size_t pix = 0; pix < li.data.size(); ++pix) {
    if (li.data[pix] == 0.0) continue;
    const double g = std::exp(li.data[pix]);
    for (int ch = 0; ch < nc; ++ch) out.data[pix * nc + ch] *= g;
  }
  return out;
}

AccumSequence accumulate(const EventStream & stream, const Contrast & c, AccumMode mode)
{
  check_stream(stream, c);
  const PixelIndex idx = PixelIndex::build(stream);
  AccumSequence out;
  out.width = stream.width;
  out.height = stream.height;
  out.mode = mode;
  out.offsets = idx.offsets;
  out.values.resize(stream.events.size());
  const std::size_t n_pix = std::size_t(stream.width) * stream.height;
  for (std::size_t pix = 0; pix < n_pix; ++pix) {
    const double cp = c.at(pix);
    double run = 0.0;
    for (uint32_t k = idx.offsets[pix]; k < idx.offsets[pix + 1]; ++k) {
      const Event & e = stream.events[idx.order[k]];
      if (mode == AccumMode::literal_sum) {
        run += std::exp(cp * e.p);
        out.values[k] = run;
      } else {
        run += cp * e.p;
        out.values[k] = std::exp(run);
      }
    }
  }
  return out;
}

Image raw_variance(const EventStream & stream, const Contrast & c, AccumMode mode)
{
  const AccumSequence acc = accumulate(stream, c, mode);
  Image out(stream.width, stream.height, 1);
  for (std::size_t pix = 0; pix < out.data.size(); ++pix) {
    const auto seq = acc.pixel(pix);
    if (seq.size() < 2) continue;
    double mean = 0.0;
    for (double v : seq) mean += v;
    mean /= static_cast<double>(seq.size());
    double var = 0.0;
    for (double v : seq) var += (v - mean) * (v - mean);
    out.data[pix] = var / static_cast<double>(seq.size());
  }
  return out;
}

VarianceMap normalize_variance(const Image & raw)
{
  VarianceMap out{raw.width, raw.height, std::vector<double>(raw.data.size(), 0.0)};
  if (raw.data.empty()) return out;
  std::vector<double> sorted = raw.data;
  std::sort(sorted.begin(), sorted.end());
  auto percentile = [&](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const std::size_t j = std::min(i + 1, sorted.size() - 1);
    return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
  };
  const double lo = percentile(0.01);
  const double hi = percentile(0.99);
  if (!(hi > lo)) return out;
  for (std::size_t i = 0; i < raw.data.size(); ++i) {
    out.v[i] = std::clamp((raw.data[i] - lo) / (hi - lo), 0.0, 1.0);
  }
  return out;
}

VarianceMap variance_map(const EventStream & stream, const Contrast & c, AccumMode mode)
{
  return normalize_variance(raw_variance(stream, c, mode));
}

}  // namespace tevkit::formation
