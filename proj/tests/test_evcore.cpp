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

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <set>

#include "test_util.hpp"
#include "tevkit/error.hpp"
#include "tevkit/events.hpp"
#include "tevkit/image.hpp"
#include "tevkit/io.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/rng.hpp"

using namespace tevkit;
using tevkit::test::TempDir;

namespace
{
EventStream random_stream(uint64_t seed, int w, int h, int n)
{
  Rng rng(seed, 3);
  EventStream s{w, h, {}};
  for (int i = 0; i < n; ++i) {
    Event e;
    e.t = static_cast<int64_t>(rng.next_u64() % 100000) - 5000;
    e.x = static_cast<uint16_t>(rng.next_u64() % w);
    e.y = static_cast<uint16_t>(rng.next_u64() % h);
    e.p = rng.uniform() < 0.5 ? -1 : 1;
    s.events.push_back(e);
  }
  s.canonicalize();
  return s;
}

}  // namespace

TEST(Evtb, EmptyStreamIsBareHeader)
{
  TempDir dir;
  write_events(EventStream{4, 4, {}}, dir / "e.evtb");
  const std::string b = test::read_bytes(dir / "e.evtb");
  const std::string expected("EVTB\x01\x00\x00\x00\x04\x00\x04\x00\x00\x00\x00\x00\x00\x00\x00\x00", 20);
  EXPECT_EQ(b, expected);
}

TEST(Evtb, OneEventHandEncoded)
{
  TempDir dir;
  EventStream s{4, 4, {Event{100, 1, 2, 1}}};
  write_events(s, dir / "e.evtb");
  const std::string b = test::read_bytes(dir / "e.evtb");
  ASSERT_EQ(b.size(), 36u);
  const std::string header("EVTB\x01\x00\x00\x00\x04\x00\x04\x00\x01\x00\x00\x00\x00\x00\x00\x00", 20);
  const std::string record("\x64\x00\x00\x00\x00\x00\x00\x00\x01\x00\x02\x00\x01\x00\x00\x00", 16);
  EXPECT_EQ(b.substr(0, 20), header);
  EXPECT_EQ(b.substr(20), record);
  EXPECT_EQ(read_events(dir / "e.evtb"), s);
}

TEST(Evtb, NegativePolarityAndTimeEncoding)
{
  TempDir dir;
  EventStream s{8, 8, {Event{-2, 7, 0, -1}}};
  write_events(s, dir / "e.evtb");
  const std::string b = test::read_bytes(dir / "e.evtb");
  EXPECT_EQ(b.substr(20, 8), std::string(8, '\xff').replace(0, 1, "\xfe"));
  EXPECT_EQ(static_cast<unsigned char>(b[32]), 0xffu);
  EXPECT_EQ(read_events(dir / "e.evtb"), s);
}

TEST(Evtb, RejectsBadMagicVersionAndTruncation)
{
  TempDir dir;
  write_events(EventStream{4, 4, {Event{1, 0, 0, 1}}}, dir / "ok.evtb");
  std::string b = test::read_bytes(dir / "ok.evtb");

  std::string bad_version = b;
  bad_version[4] = 2;
  test::write_bytes(dir / "v.evtb", bad_version);
  EXPECT_THROW(read_events(dir / "v.evtb"), FormatError);

  test::write_bytes(dir / "t.evtb", b.substr(0, b.size() - 3));
  EXPECT_THROW(read_events(dir / "t.evtb"), FormatError);

  test::write_bytes(dir / "x.evtb", b + "junk");
  EXPECT_THROW(read_events(dir / "x.evtb"), FormatError);

  std::string bad_magic = b;
  bad_magic[0] = 'X';
  test::write_bytes(dir / "m.evtb", bad_magic);
  EXPECT_THROW(read_events(dir / "m.evtb"), FormatError);
}

TEST(Evtb, ZeroPolarityAndOutOfBoundsRejected)
{
  TempDir dir;
  write_events(EventStream{4, 4, {Event{1, 3, 3, 1}}}, dir / "ok.evtb");
  std::string b = test::read_bytes(dir / "ok.evtb");
  std::string zero_p = b;
  zero_p[32] = 0;
  test::write_bytes(dir / "p.evtb", zero_p);
  EXPECT_THROW(read_events(dir / "p.evtb"), ValidationError);

  std::string oob = b;
  oob[28] = 4;
  test::write_bytes(dir / "o.evtb", oob);
  EXPECT_THROW(read_events(dir / "o.evtb"), ValidationError);

  EXPECT_THROW(write_events(EventStream{4, 4, {Event{1, 9, 0, 1}}}, dir / "w.evtb"), ValidationError);
}

TEST(Evtb, UnsortedFileIsCanonicalizedOnRead)
{
  TempDir dir;
  // hand-build two records out of order
  std::string b("EVTB\x01\x00\x00\x00\x04\x00\x04\x00\x02\x00\x00\x00\x00\x00\x00\x00", 20);
  b += std::string("\x14\x00\x00\x00\x00\x00\x00\x00\x01\x00\x01\x00\x01\x00\x00\x00", 16);
  b += std::string("\x0a\x00\x00\x00\x00\x00\x00\x00\x02\x00\x00\x00\xff\x00\x00\x00", 16);
  test::write_bytes(dir / "u.evtb", b);
  const EventStream s = read_events(dir / "u.evtb");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.events[0], (Event{10, 2, 0, -1}));
  EXPECT_EQ(s.events[1], (Event{20, 1, 1, 1}));
}

TEST(Csv, ThreeRows)
{
  TempDir dir;
  test::write_bytes(dir / "e.csv", "t,x,y,p\n5,0,1,1\n7,2,0,-1\n9,1,1,1\n");
  const EventStream s = read_events(dir / "e.csv", 3, 2);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.width, 3);
  EXPECT_EQ(s.height, 2);
  EXPECT_EQ(s.events[0], (Event{5, 0, 1, 1}));
  EXPECT_EQ(s.events[1], (Event{7, 2, 0, -1}));
  EXPECT_EQ(s.events[2], (Event{9, 1, 1, 1}));
}

TEST(Csv, GeometryFromBoundingBoxWhenUnset)
{
  TempDir dir;
  test::write_bytes(dir / "e.csv", "t,x,y,p\r\n1,4,2,1\r\n");
  const EventStream s = read_events(dir / "e.csv");
  EXPECT_EQ(s.width, 5);
  EXPECT_EQ(s.height, 3);
}

TEST(Csv, Rejections)
{
  TempDir dir;
  test::write_bytes(dir / "p.csv", "t,x,y,p\n1,0,0,0\n");
  EXPECT_THROW(read_events(dir / "p.csv", 2, 2), ValidationError);
  test::write_bytes(dir / "h.csv", "x,y,t,p\n1,0,0,1\n");
  EXPECT_THROW(read_events(dir / "h.csv", 2, 2), FormatError);
  test::write_bytes(dir / "m.csv", "t,x,y,p\n1,0,0\n");
  EXPECT_THROW(read_events(dir / "m.csv", 2, 2), FormatError);
  test::write_bytes(dir / "b.csv", "t,x,y,p\n1,5,0,1\n");
  EXPECT_THROW(read_events(dir / "b.csv", 2, 2), ValidationError);
}

TEST(EventsProperty, EvtbAndCsvRoundTripsAreIdentity)
{
  TempDir dir;
  for (uint64_t seed = 0; seed < 25; ++seed) {
    const EventStream s = random_stream(seed, 17 + int(seed), 9 + int(seed % 5), int(seed * 37));
    write_events(s, dir / "r.evtb");
    write_events_csv(s, dir / "r.csv");
    EXPECT_EQ(read_events(dir / "r.evtb"), s) << "seed " << seed;
    EXPECT_EQ(read_events(dir / "r.csv", s.width, s.height), s) << "seed " << seed;
  }
}

TEST(Events, CanonicalOrderBreaksTiesByRowColumnPolarity)
{
  EventStream s{4, 4, {Event{5, 1, 1, 1}, Event{5, 0, 1, 1}, Event{5, 3, 0, 1}, Event{5, 0, 1, -1}, Event{4, 3, 3, 1}}};
  EXPECT_FALSE(s.is_canonical());
  EXPECT_THROW(s.validate(), ValidationError);
  s.canonicalize();
  const std::vector<Event> expected{
    Event{4, 3, 3, 1}, Event{5, 3, 0, 1}, Event{5, 0, 1, -1}, Event{5, 0, 1, 1}, Event{5, 1, 1, 1}};
  EXPECT_EQ(s.events, expected);
}

TEST(Slice, Examples)
{
  const EventStream s{2, 1, {Event{10, 0, 0, 1}, Event{20, 1, 0, -1}, Event{30, 0, 0, 1}}};
  EXPECT_EQ(slice_events(s, 0, 31), s);
  EXPECT_TRUE(slice_events(s, 20, 20).empty());
  const EventStream mid = slice_events(s, 15, 30);
  ASSERT_EQ(mid.size(), 1u);
  EXPECT_EQ(mid.events[0], s.events[1]);
  EXPECT_EQ(mid.width, 2);
  EXPECT_THROW(slice_events(s, 5, 4), ArgumentError);
}

TEST(Slice, MatchesLinearFilterOnRandomStreams)
{
  const EventStream s = random_stream(11, 8, 8, 500);
  for (int64_t t0 : {-6000, 0, 1234, 50000}) {
    for (int64_t t1 : {t0, t0 + 1, t0 + 20000, int64_t(200000)}) {
      std::vector<Event> want;
      for (const Event & e : s.events) {
        if (e.t >= t0 && e.t < t1) want.push_back(e);
      }
      EXPECT_EQ(slice_events(s, t0, t1).events, want);
    }
  }
}

TEST(PixelIndex, GroupsEventsPerPixelInTimeOrder)
{
  const EventStream s = random_stream(4, 5, 3, 200);
  const PixelIndex idx = PixelIndex::build(s);
  ASSERT_EQ(idx.offsets.size(), 16u);
  EXPECT_EQ(idx.offsets.back(), 200u);
  for (std::size_t pix = 0; pix < 15; ++pix) {
    int64_t last = INT64_MIN;
    for (uint32_t k = idx.offsets[pix]; k < idx.offsets[pix + 1]; ++k) {
      const Event & e = s.events[idx.order[k]];
      EXPECT_EQ(std::size_t(e.y) * 5 + e.x, pix);
      EXPECT_GE(e.t, last);
      last = e.t;
    }
  }
}

TEST(Pfm, ConstantHalfPayload)
{
  TempDir dir;
  write_image(Image(2, 2, 1, 0.5), dir / "h.pfm");
  const std::string b = test::read_bytes(dir / "h.pfm");
  const std::string header = "Pf\n2 2\n-1.0\n";
  ASSERT_EQ(b.size(), header.size() + 16);
  EXPECT_EQ(b.substr(0, header.size()), header);
  // 0.5f = 0x3f000000, little-endian
  const std::string one("\x00\x00\x00\x3f", 4);
  EXPECT_EQ(b.substr(header.size()), one + one + one + one);
}

TEST(Pfm, BottomToTopRowsAndByteExactRoundTrip)
{
  TempDir dir;
  Image img(3, 2, 1);
  for (int i = 0; i < 6; ++i) img.data[i] = 0.1 * (i + 1);
  write_pfm(img, dir / "a.pfm");
  const std::string b = test::read_bytes(dir / "a.pfm");
  float first = 0.0f;
  std::memcpy(&first, b.data() + std::string("Pf\n3 2\n-1.0\n").size(), 4);
  EXPECT_EQ(first, 0.4f);  // first stored row is the bottom one
  const Image back = read_image(dir / "a.pfm");
  write_pfm(back, dir / "b.pfm");
  EXPECT_EQ(test::read_bytes(dir / "b.pfm"), b);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(back.data[i], double(float(img.data[i])));
}

TEST(Pfm, BigEndianAndColor)
{
  TempDir dir;
  std::string b = "PF\n1 1\n1.0\n";
  for (float f : {0.25f, 0.5f, 1.0f}) {
    const uint32_t bits = std::bit_cast<uint32_t>(f);
    for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<char>((bits >> s) & 0xff));
  }
  test::write_bytes(dir / "c.pfm", b);
  const Image img = read_image(dir / "c.pfm");
  ASSERT_EQ(img.channels, 3);
  EXPECT_EQ(img.data, (std::vector<double>{0.25, 0.5, 1.0}));
}

TEST(Pfm, RejectsMalformedAndNaN)
{
  TempDir dir;
  test::write_bytes(dir / "t.pfm", "Pf\n2 2\n-1.0\n\x00\x00");
  EXPECT_THROW(read_image(dir / "t.pfm"), FormatError);
  test::write_bytes(dir / "m.pfm", "Pq\n2 2\n-1.0\n");
  EXPECT_THROW(read_image(dir / "m.pfm"), FormatError);
  Image nan_img(1, 1, 1, std::nan(""));
  EXPECT_THROW(write_image(nan_img, dir / "n.pfm"), ValidationError);
  EXPECT_THROW(write_image(Image(1, 1, 1, -0.1), dir / "neg.pfm"), ValidationError);
}

TEST(Pgm, SixteenBitScale)
{
  TempDir dir;
  test::write_bytes(dir / "a.pgm", std::string("P5\n2 1\n65535\n\xff\xff\x80\x00", 17));
  const Image img = read_image(dir / "a.pgm");
  EXPECT_EQ(img.data[0], 1.0);
  EXPECT_DOUBLE_EQ(img.data[1], 32768.0 / 65535.0);
}

TEST(Pgm, WriteQuantizesTo16Bits)
{
  TempDir dir;
  Image img(2, 2, 1);
  img.data = {0.0, 0.25, 0.5, 1.0};
  write_image(img, dir / "q.pgm");
  const Image back = read_image(dir / "q.pgm");
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(back.data[i], img.data[i], 0.5 / 65535.0);
  EXPECT_EQ(back.data[3], 1.0);
}

TEST(Flow, PfmRoundTrip)
{
  TempDir dir;
  TiltFlow f(3, 2);
  for (int i = 0; i < 6; ++i) {
    f.u[i] = 0.5 * i - 1.0;
    f.v[i] = -0.25 * i;
  }
  write_flow(f, dir / "f.pfm");
  const TiltFlow g = read_flow(dir / "f.pfm");
  EXPECT_EQ(g.u, f.u);
  EXPECT_EQ(g.v, f.v);
}

TEST(Image, ValidateAndLuminance)
{
  Image rgb(1, 1, 3);
  rgb.data = {1.0, 0.0, 0.0};
  EXPECT_NEAR(rgb.luminance().data[0], 0.299, 1e-12);
  Image bad(1, 1, 1, std::numeric_limits<double>::infinity());
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(FrameSequence, Validation)
{
  FrameSequence seq;
  seq.frames = {Image(2, 2), Image(2, 2)};
  seq.timestamps = {10, 10};
  seq.exposure_end = 20;
  EXPECT_THROW(seq.validate(), ValidationError);
  seq.timestamps = {10, 30};
  EXPECT_THROW(seq.validate(), ValidationError);
  seq.timestamps = {10, 20};
  EXPECT_NO_THROW(seq.validate());
}

TEST(Rng, ThousandDrawsAreReproducible)
{
  Rng a(7, 0);
  Rng b(7, 0);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, PinnedSequence)
{
  // splitmix64 reference values for state 0
  uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(splitmix64(s), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(splitmix64(s), 0x06c45d188009454fULL);
}

TEST(Rng, StreamsDifferAndUniformsAreInRange)
{
  Rng a(7, 0);
  Rng b(7, 1);
  std::set<uint64_t> seen;
  int same = 0;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.next_u64();
    same += x == b.next_u64();
    seen.insert(x);
  }
  EXPECT_EQ(same, 0);
  EXPECT_EQ(seen.size(), 100u);
  Rng r(1, 2);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double g = r.normal();
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Parallel, CoversRangeOnceAndRethrowsLowestChunk)
{
  set_thread_count(4);
  std::vector<int> hits(103, 0);
  parallel_rows(103, [&](int b, int e) {
    for (int i = b; i < e; ++i) ++hits[i];
  });
  for (int h : hits) EXPECT_EQ(h, 1);
  try {
    parallel_rows(8, [](int b, int) { throw ArgumentError("chunk " + std::to_string(b)); });
    FAIL();
  } catch (const ArgumentError & e) {
    EXPECT_STREQ(e.what(), "chunk 0");
  }
  set_thread_count(1);
}
