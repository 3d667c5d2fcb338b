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

#include "tevkit/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "tevkit/error.hpp"

namespace fs = std::filesystem;

namespace tevkit
{
namespace
{
template <typename T>
void put_le(std::string & buf, T value)
{
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf.push_back(static_cast<char>((u >> (8 * i)) & 0xFF));
  }
}

template <typename T>
T get_le(const unsigned char * p)
{
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u |= static_cast<U>(static_cast<U>(p[i]) << (8 * i));
  }
  return static_cast<T>(u);
}

std::string slurp(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const std::string & bytes, const fs::path & path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

EventStream parse_evtb(const std::string & bytes, const fs::path & path)
{
  if (bytes.size() < kEvtbHeaderSize) throw FormatError(path.string() + ": truncated EVTB header");
  const auto * p = reinterpret_cast<const unsigned char *>(bytes.data());
  if (std::memcmp(p, "EVTB", 4) != 0) throw FormatError(path.string() + ": bad EVTB magic");
  const auto version = get_le<uint32_t>(p + 4);
  if (version != kEvtbVersion) {
    throw FormatError(path.string() + ": unsupported EVTB version " + std::to_string(version));
  }
  EventStream s;
  s.width = get_le<uint16_t>(p + 8);
  s.height = get_le<uint16_t>(p + 10);
  const auto count = get_le<uint64_t>(p + 12);
  const std::size_t payload = bytes.size() - kEvtbHeaderSize;
  if (payload / kEvtbRecordSize < count) {
    throw FormatError(path.string() + ": truncated EVTB record section");
  }
  if (payload != count * kEvtbRecordSize) {
    throw FormatError(path.string() + ": trailing bytes after EVTB records");
  }
  s.events.resize(count);
  const unsigned char * r = p + kEvtbHeaderSize;
  for (std::size_t i = 0; i < count; ++i, r += kEvtbRecordSize) {
    Event & e = s.events[i];
    e.t = get_le<int64_t>(r);
    e.x = get_le<uint16_t>(r + 8);
    e.y = get_le<uint16_t>(r + 10);
    e.p = static_cast<int8_t>(r[12]);
  }
  return s;
}

EventStream parse_csv(const std::string & text, const fs::path & path, int width, int height)
{
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": empty event file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,p") throw FormatError(path.string() + ": expected CSV header 't,x,y,p'");
  EventStream s;
  int max_x = -1;
  int max_y = -1;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<long long, 4> f{};
    const char * cur = line.data();
    const char * end = line.data() + line.size();
    for (std::size_t k = 0; k < 4; ++k) {
      auto [ptr, ec] = std::from_chars(cur, end, f[k]);
      if (ec != std::errc() || (k < 3 && (ptr == end || *ptr != ',')) || (k == 3 && ptr != end)) {
        throw FormatError(path.string() + ": malformed CSV line " + std::to_string(lineno));
      }
      cur = ptr + 1;
    }
    if (f[1] < 0 || f[2] < 0 || f[1] > 65535 || f[2] > 65535) {
      throw ValidationError(path.string() + ": coordinate out of range on line " + std::to_string(lineno));
    }
    if (f[3] != 1 && f[3] != -1) {
      throw ValidationError(path.string() + ": polarity must be +1/-1 on line " + std::to_string(lineno));
    }
    Event e{f[0], static_cast<uint16_t>(f[1]), static_cast<uint16_t>(f[2]), static_cast<int8_t>(f[3])};
    max_x = std::max<int>(max_x, e.x);
    max_y = std::max<int>(max_y, e.y);
    s.events.push_back(e);
  }
  if (width == 0 && height == 0) {
    s.width = max_x + 1;
    s.height = max_y + 1;
  } else {
    s.width = width;
    s.height = height;
  }
  return s;
}

// Reads the next whitespace-delimited token of a netpbm-style header.
std::string next_token(const std::string & bytes, std::size_t & pos, const fs::path & path)
{
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw FormatError(path.string() + ": malformed image header");
  return bytes.substr(start, pos - start);
}

int parse_dim(const std::string & tok, const fs::path & path)
{
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || v <= 0) {
    throw FormatError(path.string() + ": bad image dimension '" + tok + "'");
  }
  return v;
}

// Returns the raw PFM samples (finite check left to the caller).
Image parse_pfm(const std::string & bytes, const fs::path & path)
{
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos, path);
  const int channels = magic == "Pf" ? 1 : magic == "PF" ? 3 : 0;
  if (channels == 0) throw FormatError(path.string() + ": not a PFM file");
  const int w = parse_dim(next_token(bytes, pos, path), path);
  const int h = parse_dim(next_token(bytes, pos, path), path);
  const std::string scale_tok = next_token(bytes, pos, path);
  double scale = 0.0;
  try {
    scale = std::stod(scale_tok);
  } catch (const std::exception &) {
    throw FormatError(path.string() + ": bad PFM scale");
  }
  if (scale == 0.0) throw FormatError(path.string() + ": PFM scale must be non-zero");
  ++pos;  // single whitespace byte terminates the header
  const bool little = scale < 0.0;
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < pos + 4 * n) throw FormatError(path.string() + ": truncated PFM payload");
  Image img(w, h, channels);
  const auto * p = reinterpret_cast<const unsigned char *>(bytes.data() + pos);
  for (int row = 0; row < h; ++row) {
    const int y = h - 1 - row;
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        uint32_t bits = 0;
        if (little) {
          bits = get_le<uint32_t>(p);
        } else {
          bits = (uint32_t(p[0]) << 24) | (uint32_t(p[1]) << 16) | (uint32_t(p[2]) << 8) | uint32_t(p[3]);
        }
        p += 4;
        img.at(x, y, c) = static_cast<double>(std::bit_cast<float>(bits));
      }
    }
  }
  return img;
}

std::string encode_pfm(const Image & img)
{
  std::string buf = (img.channels == 1 ? "Pf\n" : "PF\n") + std::to_string(img.width) + " " +
                    std::to_string(img.height) + "\n-1.0\n";
  buf.reserve(buf.size() + img.data.size() * 4);
  for (int row = 0; row < img.height; ++row) {
    const int y = img.height - 1 - row;
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < img.channels; ++c) {
        put_le<uint32_t>(buf, std::bit_cast<uint32_t>(static_cast<float>(img.at(x, y, c))));
      }
    }
  }
  return buf;
}

Image parse_pnm(const std::string & bytes, const fs::path & path)
{
  std::size_t pos = 0;
  const std::string magic = next_token(bytes, pos, path);
  const int channels = magic == "P5" ? 1 : magic == "P6" ? 3 : 0;
  if (channels == 0) throw FormatError(path.string() + ": unsupported PNM variant " + magic);
  const int w = parse_dim(next_token(bytes, pos, path), path);
  const int h = parse_dim(next_token(bytes, pos, path), path);
  const int maxval = parse_dim(next_token(bytes, pos, path), path);
  if (maxval > 65535) throw FormatError(path.string() + ": PNM maxval exceeds 65535");
  ++pos;
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * h * channels;
  if (bytes.size() < pos + bps * n) throw FormatError(path.string() + ": truncated PNM payload");
  Image img(w, h, channels);
  const auto * p = reinterpret_cast<const unsigned char *>(bytes.data() + pos);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned v = bps == 2 ? (unsigned(p[2 * i]) << 8) | p[2 * i + 1] : p[i];
    img.data[i] = static_cast<double>(v) / maxval;
  }
  return img;
}

}  // namespace

void write_events(const EventStream & stream, const fs::path & path)
{
  stream.validate();
  std::string buf;
  buf.reserve(kEvtbHeaderSize + kEvtbRecordSize * stream.events.size());
  buf.append("EVTB", 4);
  put_le<uint32_t>(buf, kEvtbVersion);
  put_le<uint16_t>(buf, static_cast<uint16_t>(stream.width));
  put_le<uint16_t>(buf, static_cast<uint16_t>(stream.height));
  put_le<uint64_t>(buf, stream.events.size());
  for (const Event & e : stream.events) {
    put_le<int64_t>(buf, e.t);
    put_le<uint16_t>(buf, e.x);
    put_le<uint16_t>(buf, e.y);
    put_le<int8_t>(buf, e.p);
    buf.append(3, '\0');
  }
  dump(buf, path);
}

EventStream read_events(const fs::path & path, int width, int height)
{
  const std::string bytes = slurp(path);
  EventStream s = bytes.compare(0, 4, "EVTB") == 0 ? parse_evtb(bytes, path)
                                                   : parse_csv(bytes, path, width, height);
  if (!s.is_canonical()) s.canonicalize();
  s.validate();
  return s;
}

void write_events_csv(const EventStream & stream, const fs::path & path)
{
  stream.validate();
  std::string buf = "t,x,y,p\n";
  for (const Event & e : stream.events) {
    buf += std::to_string(e.t) + ',' + std::to_string(e.x) + ',' + std::to_string(e.y) + ',' +
           std::to_string(int(e.p)) + '\n';
  }
  dump(buf, path);
}

Image read_image(const fs::path & path)
{
  const std::string bytes = slurp(path);
  Image img = bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == 'f' || bytes[1] == 'F')
                ? parse_pfm(bytes, path)
                : parse_pnm(bytes, path);
  img.validate();
  return img;
}

void write_pfm(const Image & image, const fs::path & path)
{
  image.validate();
  dump(encode_pfm(image), path);
}

void write_pgm16(const Image & image, const fs::path & path)
{
  image.validate();
  std::string buf = (image.channels == 1 ? "P5\n" : "P6\n") + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n65535\n";
  for (double v : image.data) {
    const auto q = static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 65535.0));
    buf.push_back(static_cast<char>(q >> 8));
    buf.push_back(static_cast<char>(q & 0xFF));
  }
  dump(buf, path);
}

void write_image(const Image & image, const fs::path & path)
{
  const std::string ext = path.extension().string();
  if (ext == ".pgm" || ext == ".ppm") {
    write_pgm16(image, path);
  } else {
    write_pfm(image, path);
  }
}

void write_flow(const TiltFlow & flow, const fs::path & path)
{
  flow.validate();
  Image packed;
  packed.width = flow.width;
  packed.height = flow.height;
  packed.channels = 3;
  packed.data.resize(flow.u.size() * 3);
  for (std::size_t i = 0; i < flow.u.size(); ++i) {
    packed.data[3 * i] = flow.u[i];
    packed.data[3 * i + 1] = flow.v[i];
    packed.data[3 * i + 2] = 0.0;
  }
  dump(encode_pfm(packed), path);
}

TiltFlow read_flow(const fs::path & path)
{
  const Image packed = parse_pfm(slurp(path), path);
  if (packed.channels != 3) throw FormatError(path.string() + ": flow files are 3-channel PFM");
  TiltFlow f(packed.width, packed.height);
  for (std::size_t i = 0; i < f.u.size(); ++i) {
    f.u[i] = packed.data[3 * i];
    f.v[i] = packed.data[3 * i + 1];
  }
  f.validate();
  return f;
}

nlohmann::json read_json(const fs::path & path)
{
  try {
    return nlohmann::json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(const nlohmann::json & doc, const fs::path & path) { dump(doc.dump(2) + "\n", path); }

}  // namespace tevkit
