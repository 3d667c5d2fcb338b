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

#ifndef TEVKIT_DATASET_HPP
#define TEVKIT_DATASET_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tevkit/config.hpp"

namespace tevkit::bench
{
struct ManifestEntry
{
  std::string id;
  // paths are relative to the manifest's directory
  std::string clean_path;
  std::string turbulent_path;
  std::string events_path;
  std::string tilt_ref_path;
  std::string params_hash;
  int64_t exposure_start{0};
  int64_t exposure_end{0};
  int64_t t_ref{0};  // timestamp of the reference latent
};

struct DatasetManifest
{
  std::vector<ManifestEntry> entries;
  std::vector<std::string> train;
  std::vector<std::string> test;
  uint64_t seed{0};

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json & doc);
  // ids unique, files present under base_dir, split disjoint and exhaustive
  void validate(const std::filesystem::path & base_dir) const;
  const ManifestEntry & entry(const std::string & id) const;
};

inline constexpr const char * kManifestName = "manifest.json";

// Renders one turbulent sample per clean image (sorted by file name) and
// writes clean/turbulent PFM, EVTB events, the reference tilt and
// manifest.json into out_dir. Each entry draws from Rng(seed, entry index),
// so output does not depend on the worker count.
DatasetManifest gen_dataset(
  const std::filesystem::path & clean_dir, const std::filesystem::path & out_dir, const ToolConfig & cfg,
  uint64_t seed);

// Writes count procedural scenes of size x size as PFM into dir.
void write_synthetic_scenes(const std::filesystem::path & dir, int count, int size, uint64_t seed);

}  // namespace tevkit::bench

#endif  // TEVKIT_DATASET_HPP
