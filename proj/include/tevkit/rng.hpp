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

#ifndef TEVKIT_RNG_HPP
#define TEVKIT_RNG_HPP

#include <array>
#include <cstdint>

namespace tevkit
{
// xoshiro256** seeded through splitmix64.
//
// The 256-bit state is filled with four consecutive splitmix64 outputs
// started from `seed ^ (stream_id * 0x9E3779B97F4A7C15)` advanced once
// per stream so that (seed, stream_id) pairs map to unrelated sequences.
// Only integer arithmetic is involved in the raw stream; uniform doubles
// take the top 53 bits and normals use Box-Muller with the cached second
// sample, so sequences are identical on every IEEE-754 platform.
class Rng
{
public:
  Rng(uint64_t seed, uint64_t stream_id = 0);

  uint64_t next_u64();
  // Uniform in [0, 1).
  double uniform();
  // Uniform in (0, 1].
  double uniform_open0();
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Independent generator derived from this one's seed and a new stream id.
  Rng split(uint64_t stream_id) const { return Rng(seed_, stream_id); }

  uint64_t seed() const { return seed_; }
  uint64_t stream_id() const { return stream_id_; }

private:
  uint64_t seed_;
  uint64_t stream_id_;
  std::array<uint64_t, 4> s_{};
  bool has_spare_{false};
  double spare_{0.0};
};

uint64_t splitmix64(uint64_t & state);

}  // namespace tevkit

#endif  // TEVKIT_RNG_HPP
