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

#include "tevkit/events.hpp"

#include <algorithm>
#include <string>

#include "tevkit/error.hpp"

namespace tevkit
{
void EventStream::canonicalize() { std::sort(events.begin(), events.end(), canonical_less); }

bool EventStream::is_canonical() const
{
  return std::is_sorted(events.begin(), events.end(), canonical_less);
}

void EventStream::validate() const
{
  if (width < 0 || height < 0 || width > 65535 || height > 65535) {
    throw ValidationError("stream geometry out of range");
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event & e = events[i];
    if (e.x >= width || e.y >= height) {
      throw ValidationError(
        "event " + std::to_string(i) + " at (" + std::to_string(e.x) + "," + std::to_string(e.y) +
        ") lies outside " + std::to_string(width) + "x" + std::to_string(height));
    }
    if (e.p != 1 && e.p != -1) {
      throw ValidationError("event " + std::to_string(i) + " has polarity " + std::to_string(e.p));
    }
  }
  if (!is_canonical()) throw ValidationError("events are not in canonical (t, y, x, p) order");
}

EventStream slice_events(const EventStream & stream, int64_t t0, int64_t t1)
{
  if (t0 > t1) throw ArgumentError("slice_events: t0 > t1");
  EventStream out{stream.width, stream.height, {}};
  if (stream.is_canonical()) {
    auto lo = std::lower_bound(
      stream.events.begin(), stream.events.end(), t0,
      [](const Event & e, int64_t t) { return e.t < t; });
    auto hi = std::lower_bound(lo, stream.events.end(), t1, [](const Event & e, int64_t t) { return e.t < t; });
    out.events.assign(lo, hi);
    return out;
  }
  for (const Event & e : stream.events) {
    if (e.t >= t0 && e.t < t1) out.events.push_back(e);
  }
  return out;
}

PixelIndex PixelIndex::build(const EventStream & stream)
{
  const std::size_t n = static_cast<std::size_t>(stream.width) * stream.height;
  PixelIndex idx;
  idx.offsets.assign(n + 1, 0);
  for (const Event & e : stream.events) {
    ++idx.offsets[static_cast<std::size_t>(e.y) * stream.width + e.x + 1];
  }
  for (std::size_t i = 0; i < n; ++i) idx.offsets[i + 1] += idx.offsets[i];
  idx.order.resize(stream.events.size());
  std::vector<uint32_t> cursor(idx.offsets.begin(), idx.offsets.end() - 1);
  // stable: a canonical stream yields time order per pixel
  for (uint32_t k = 0; k < stream.events.size(); ++k) {
    const Event & e = stream.events[k];
    idx.order[cursor[static_cast<std::size_t>(e.y) * stream.width + e.x]++] = k;
  }
  return idx;
}

}  // namespace tevkit
