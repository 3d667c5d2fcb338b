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

#ifndef TEVKIT_METRICS_HPP
#define TEVKIT_METRICS_HPP

#include <limits>

#include "tevkit/image.hpp"

namespace tevkit::bench
{
// PSNR of identical images.
inline constexpr double kIdentical = std::numeric_limits<double>::infinity();
inline bool is_identical(double psnr_db) { return psnr_db == kIdentical; }

// 10 log10(peak^2 / MSE) over all samples; kIdentical when MSE is 0.
double psnr(const Image & a, const Image & b, double peak = 1.0);

// Mean SSIM over valid positions of an 11x11 Gaussian window (sigma 1.5),
// K1 = 0.01, K2 = 0.03, dynamic range 1. Color images average the
// per-channel scores.
double ssim(const Image & a, const Image & b);

// Mean Euclidean distance between two flows.
double endpoint_error(const TiltFlow & a, const TiltFlow & b);

}  // namespace tevkit::bench

#endif  // TEVKIT_METRICS_HPP
