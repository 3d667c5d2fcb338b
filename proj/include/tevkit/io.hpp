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

#ifndef TEVKIT_IO_HPP
#define TEVKIT_IO_HPP

#include <filesystem>
#include <nlohmann/json.hpp>

#include "tevkit/events.hpp"
#include "tevkit/image.hpp"

namespace tevkit
{
// EVTB: little-endian binary event file.
//   header  "EVTB" | u32 version=1 | u16 width | u16 height | u64 count   (20 bytes)
//   record  i64 t | u16 x | u16 y | i8 p | 3 zero bytes                  (16 bytes)
inline constexpr uint32_t kEvtbVersion = 1;
inline constexpr std::size_t kEvtbHeaderSize = 20;
inline constexpr std::size_t kEvtbRecordSize = 16;

void write_events(const EventStream & stream, const std::filesystem::path & path);
// Dispatches on content: EVTB magic, otherwise CSV with a "t,x,y,p" header.
// CSV files carry no geometry, so width/height come from the arguments (or
// the bounding box of the events when both are zero).
EventStream read_events(const std::filesystem::path & path, int width = 0, int height = 0);
void write_events_csv(const EventStream & stream, const std::filesystem::path & path);

// PFM ("Pf" gray, "PF" color) written little-endian with scale -1.0, rows
// bottom-to-top per the format. Reading accepts either endianness.
// PGM is 16-bit binary (P5, maxval 65535), samples scaled by 1/65535.
Image read_image(const std::filesystem::path & path);
void write_image(const Image & image, const std::filesystem::path & path);
void write_pfm(const Image & image, const std::filesystem::path & path);
void write_pgm16(const Image & image, const std::filesystem::path & path);

// Flows are stored as 3-channel PFM (u, v, 0).
void write_flow(const TiltFlow & flow, const std::filesystem::path & path);
TiltFlow read_flow(const std::filesystem::path & path);

nlohmann::json read_json(const std::filesystem::path & path);
void write_json(const nlohmann::json & doc, const std::filesystem::path & path);

}  // namespace tevkit

#endif  // TEVKIT_IO_HPP
