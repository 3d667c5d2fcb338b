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

#ifndef TEVKIT_SCENE_HPP
#define TEVKIT_SCENE_HPP

#include "tevkit/image.hpp"
#include "tevkit/rng.hpp"

namespace tevkit::bench
{
// Dead-leaves grayscale test scene in [0.05, 0.95]: occluding discs with
// power-law radii and uniform gray levels, lightly anti-aliased.
Image synth_scene(int width, int height, Rng & rng);

// Centre crop to (width, height); throws ArgumentError if the source is smaller.
Image center_crop(const Image & image, int width, int height);

}  // namespace tevkit::bench

#endif  // TEVKIT_SCENE_HPP
