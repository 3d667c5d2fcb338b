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

#include "tevkit/metrics.hpp"

#include <cmath>
#include <vector>

#include "tevkit/error.hpp"

namespace tevkit::bench
{
double psnr(const Image & a, const Image & b, double peak)
{
  if (!a.same_shape(b)) throw ArgumentError("psnr: image shapes differ");
  if (a.data.empty()) throw ArgumentError("psnr: empty images");
  double sse = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sse += d * d;
  }
  if (sse == 0.0) return kIdentical;
  const double mse = sse / static_cast<double>(a.data.size());
  return 10.0 * std::log10(peak * peak / mse);
}

namespace
{
constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 1.0) * (0.01 * 1.0);
constexpr double kC2 = (0.03 * 1.0) * (0.03 * 1.0);

std::vector<double> window_1d()
{
  std::vector<double> k(kWindow);
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - kWindow / 2;
    k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
    sum += k[i];
  }
  for (double & v : k) v /= sum;
  return k;
}

// Valid-mode separable filtering.
std::vector<double> filter_valid(const std::vector<double> & src, int w, int h, const std::vector<double> & k)
{
  const int ow = w - kWindow + 1;
  const int oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += k[i] * src[std::size_t(y) * w + x + i];
      tmp[std::size_t(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < kWindow; ++i) acc += k[i] * tmp[std::size_t(y + i) * ow + x];
      out[std::size_t(y) * ow + x] = acc;
    }
  }
  return out;
}

double ssim_plane(const Image & a, const Image & b)
{
  const int w = a.width;
  const int h = a.height;
  const auto k = window_1d();
  const std::size_t n = a.data.size();
  std::vector<double> aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    aa[i] = a.data[i] * a.data[i];
    bb[i] = b.data[i] * b.data[i];
    ab[i] = a.data[i] * b.data[i];
  }
  const auto mu_a = filter_valid(a.data, w, h, k);
  const auto mu_b = filter_valid(b.data, w, h, k);
  const auto m_aa = filter_valid(aa, w, h, k);
  const auto m_bb = filter_valid(bb, w, h, k);
  const auto m_ab = filter_valid(ab, w, h, k);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double va = m_aa[i] - mu_a[i] * mu_a[i];
    const double vb = m_bb[i] - mu_b[i] * mu_b[i];
    const double cov = m_ab[i] - mu_a[i] * mu_b[i];
    const double num = (2.0 * mu_a[i] * mu_b[i] + kC1) * (2.0 * cov + kC2);
    const double den = (mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + kC1) * (va + vb + kC2);
    total += num / den;
  }
  return total / static_cast<double>(mu_a.size());
}

}  // namespace

double ssim(const Image & a, const Image & b)
{
  if (!a.same_shape(b)) throw ArgumentError("ssim: image shapes differ");
  if (a.width < kWindow || a.height < kWindow) throw ArgumentError("ssim: image smaller than the 11x11 window");
  if (a.data == b.data) return 1.0;
  double sum = 0.0;
  for (int c = 0; c < a.channels; ++c) sum += ssim_plane(a.channel(c), b.channel(c));
  return sum / a.channels;
}

double endpoint_error(const TiltFlow & a, const TiltFlow & b)
{
  if (a.width != b.width || a.height != b.height) throw ArgumentError("endpoint_error: flow sizes differ");
  if (a.u.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) acc += std::hypot(a.u[i] - b.u[i], a.v[i] - b.v[i]);
  return acc / static_cast<double>(a.u.size());
}

}  // namespace tevkit::bench
