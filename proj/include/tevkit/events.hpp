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

#ifndef TEVKIT_EVENTS_HPP
#define TEVKIT_EVENTS_HPP

#include <cstdint>
#include <vector>

namespace tevkit
{
struct Event
{
  int64_t t{0};  // microseconds
  uint16_t x{0};
  uint16_t y{0};
  int8_t p{1};  // +1 or -1

  friend bool operator==(const Event &, const Event &) = default;
};

// Canonical order: (t, y, x, p) ascending.
inline bool canonical_less(const Event & a, const Event & b)
{
  if (a.t != b.t) return a.t < b.t;
  if (a.y != b.y) return a.y < b.y;
  if (a.x != b.x) return a.x < b.x;
  return a.p < b.p;
}

struct EventStream
{
  int width{0};
  int height{0};
  std::vector<Event> events;

  friend bool operator==(const EventStream &, const EventStream &) = default;

  bool empty() const { return events.empty(); }
  std::size_t size() const { return events.size(); }

  // Sorts into canonical order.
  void canonicalize();
  bool is_canonical() const;
  // Throws ValidationError on out-of-bounds coordinates, bad polarity or
  // non-canonical order.
  void validate() const;
};

// Events with t0 <= t < t1, order preserved.
EventStream slice_events(const EventStream & stream, int64_t t0, int64_t t1);

// Per-pixel index into a stream: events of pixel i are
// order[offsets[i] .. offsets[i+1]) in time order.
struct PixelIndex
{
  std::vector<uint32_t> offsets;
  std::vector<uint32_t> order;

  static PixelIndex build(const EventStream & stream);
  std::size_t count(std::size_t pixel) const { return offsets[pixel + 1] - offsets[pixel]; }
};

}  // namespace tevkit

#endif  // TEVKIT_EVENTS_HPP
