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

#include "tevkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "tevkit/error.hpp"
#include "tevkit/evsim.hpp"
#include "tevkit/io.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/rng.hpp"
#include "tevkit/scene.hpp"
#include "tevkit/turbsim.hpp"

namespace fs = std::filesystem;

namespace tevkit::bench
{
namespace
{
using nlohmann::json;

constexpr uint64_t kSplitStream = 0xffffffffULL;

bool is_image_file(const fs::path & p)
{
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pfm" || ext == ".pgm" || ext == ".ppm";
}

}  // namespace

json DatasetManifest::to_json() const
{
  json doc;
  doc["seed"] = seed;
  json list = json::array();
  for (const auto & e : entries) {
    list.push_back(
      {{"id", e.id},
       {"clean_path", e.clean_path},
       {"turbulent_path", e.turbulent_path},
       {"events_path", e.events_path},
       {"tilt_ref_path", e.tilt_ref_path},
       {"params_hash", e.params_hash},
       {"exposure_start", e.exposure_start},
       {"exposure_end", e.exposure_end},
       {"t_ref", e.t_ref}});
  }
  doc["entries"] = list;
  doc["split"] = {{"train", train}, {"test", test}};
  return doc;
}

DatasetManifest DatasetManifest::from_json(const json & doc)
{
  DatasetManifest m;
  try {
    m.seed = doc.at("seed").get<uint64_t>();
    for (const auto & j : doc.at("entries")) {
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.clean_path = j.at("clean_path").get<std::string>();
      e.turbulent_path = j.at("turbulent_path").get<std::string>();
      e.events_path = j.at("events_path").get<std::string>();
      e.tilt_ref_path = j.value("tilt_ref_path", std::string());
      e.params_hash = j.value("params_hash", std::string());
      e.exposure_start = j.at("exposure_start").get<int64_t>();
      e.exposure_end = j.at("exposure_end").get<int64_t>();
      e.t_ref = j.at("t_ref").get<int64_t>();
      m.entries.push_back(std::move(e));
    }
    m.train = doc.at("split").at("train").get<std::vector<std::string>>();
    m.test = doc.at("split").at("test").get<std::vector<std::string>>();
  } catch (const json::exception & e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  return m;
}

void DatasetManifest::validate(const fs::path & base_dir) const
{
  std::set<std::string> ids;
  for (const auto & e : entries) {
    if (!ids.insert(e.id).second) throw ValidationError("manifest: duplicate id " + e.id);
    for (const auto * p : {&e.clean_path, &e.turbulent_path, &e.events_path}) {
      if (!fs::exists(base_dir / *p)) throw IoError("manifest: missing artifact " + (base_dir / *p).string());
    }
    if (!e.tilt_ref_path.empty() && !fs::exists(base_dir / e.tilt_ref_path)) {
      throw IoError("manifest: missing artifact " + (base_dir / e.tilt_ref_path).string());
    }
    if (e.exposure_end <= e.exposure_start || e.t_ref < e.exposure_start || e.t_ref > e.exposure_end) {
      throw ValidationError("manifest: bad exposure window for " + e.id);
    }
  }
  std::set<std::string> seen;
  for (const auto * list : {&train, &test}) {
    for (const auto & id : *list) {
      if (!ids.count(id)) throw ValidationError("manifest: split references unknown id " + id);
      if (!seen.insert(id).second) throw ValidationError("manifest: split lists overlap at " + id);
    }
  }
  if (seen.size() != ids.size()) throw ValidationError("manifest: split does not cover every entry");
}

const ManifestEntry & DatasetManifest::entry(const std::string & id) const
{
  for (const auto & e : entries) {
    if (e.id == id) return e;
  }
  throw ArgumentError("manifest: no entry " + id);
}

DatasetManifest gen_dataset(const fs::path & clean_dir, const fs::path & out_dir, const ToolConfig & cfg, uint64_t seed)
{
  if (!fs::is_directory(clean_dir)) throw IoError("gen_dataset: not a directory: " + clean_dir.string());
  std::vector<fs::path> files;
  for (const auto & d : fs::directory_iterator(clean_dir)) {
    if (d.is_regular_file() && is_image_file(d.path())) files.push_back(d.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path & a, const fs::path & b) {
    return a.filename().string() < b.filename().string();
  });
  if (files.empty()) throw ArgumentError("gen_dataset: no images in " + clean_dir.string());

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("gen_dataset: cannot create " + out_dir.string());
  {
    const fs::path probe = out_dir / ".probe";
    std::ofstream f(probe);
    if (!f) throw IoError("gen_dataset: output directory not writable: " + out_dir.string());
    f.close();
    fs::remove(probe, ec);
  }

  const int n = static_cast<int>(files.size());
  DatasetManifest manifest;
  manifest.seed = seed;
  manifest.entries.resize(n);
  std::set<std::string> ids;
  for (int i = 0; i < n; ++i) {
    const std::string id = files[i].stem().string();
    if (!ids.insert(id).second) throw ArgumentError("gen_dataset: duplicate image name " + id);
    manifest.entries[i].id = id;
  }

  const std::string base_hash = cfg.to_json().dump();
  parallel_rows(n, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      ManifestEntry & e = manifest.entries[i];
      Image img = read_image(files[i]).luminance();
      const int size = cfg.dataset.size;
      if (img.width < size || img.height < size) {
        throw ArgumentError("gen_dataset: " + files[i].filename().string() + " is smaller than the crop size");
      }
      Image clean = center_crop(img, size, size);
      for (double & v : clean.data) v = std::clamp(v, 0.0, 1.0);

      Rng rng(seed, static_cast<uint64_t>(i));
      turbsim::TurbulenceParams tp = cfg.turbulence;
      tp.seed = rng.next_u64();
      ThresholdModel em = cfg.event_sim;
      em.seed = rng.next_u64();
      Rng turb_rng(tp.seed, 0);
      const auto render = turbsim::render_turbulent(clean, tp, turb_rng);
      const auto sim = evsim::simulate_events(render.latents, em);

      const fs::path dir = out_dir / e.id;
      fs::create_directories(dir);
      e.clean_path = e.id + "/clean.pfm";
      e.turbulent_path = e.id + "/turbulent.pfm";
      e.events_path = e.id + "/events.evtb";
      e.tilt_ref_path = e.id + "/tilt_ref.pfm";
      write_pfm(clean, out_dir / e.clean_path);
      write_pfm(render.turbulent, out_dir / e.turbulent_path);
      write_events(sim.stream, out_dir / e.events_path);
      write_flow(render.tilt_ref, out_dir / e.tilt_ref_path);
      e.exposure_start = render.latents.exposure_start;
      e.exposure_end = render.latents.exposure_end;
      e.t_ref = render.latents.timestamps[render.reference_index];
      e.params_hash = fnv1a_hex(base_hash + "/" + std::to_string(tp.seed) + "/" + std::to_string(em.seed));
    }
  });

  // shuffled 9:1-style split
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  Rng split_rng(seed, kSplitStream);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(split_rng.next_u64() % static_cast<uint64_t>(i + 1));
    std::swap(order[i], order[j]);
  }
  int n_test = static_cast<int>(std::lround(n * cfg.dataset.test_fraction));
  n_test = std::clamp(n_test, 1, std::max(1, n - 1));
  std::vector<bool> is_test(n, false);
  for (int k = 0; k < n_test; ++k) is_test[order[k]] = true;
  for (int i = 0; i < n; ++i) (is_test[i] ? manifest.test : manifest.train).push_back(manifest.entries[i].id);

  json doc = manifest.to_json();
  doc["config"] = cfg.to_json();
  write_json(doc, out_dir / kManifestName);
  manifest.validate(out_dir);
  return manifest;
}

void write_synthetic_scenes(const fs::path & dir, int count, int size, uint64_t seed)
{
  if (count < 1 || size < 1) throw ArgumentError("write_synthetic_scenes: count and size must be positive");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create " + dir.string());
  parallel_rows(count, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng(seed, static_cast<uint64_t>(i));
      char name[32];
      std::snprintf(name, sizeof(name), "scene_%04d.pfm", i);
      write_pfm(synth_scene(size, size, rng), dir / name);
    }
  });
}

}  // namespace tevkit::bench
