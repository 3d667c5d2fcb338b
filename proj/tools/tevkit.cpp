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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tevkit/config.hpp"
#include "tevkit/dataset.hpp"
#include "tevkit/error.hpp"
#include "tevkit/eval.hpp"
#include "tevkit/evsim.hpp"
#include "tevkit/formation.hpp"
#include "tevkit/io.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/restore.hpp"
#include "tevkit/rng.hpp"
#include "tevkit/turbsim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tevkit;

namespace
{
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitFloor = 4;

struct Common
{
  std::string config;
  std::optional<uint64_t> seed;
  std::string out = ".";
};

void add_common(CLI::App * cmd, Common & c)
{
  cmd->add_option("--config", c.config, "JSON config file");
  cmd->add_option("--seed", c.seed, "RNG seed");
  cmd->add_option("--out", c.out, "output directory");
}

bench::ToolConfig load_config(const Common & c)
{
  bench::ToolConfig cfg = c.config.empty() ? bench::ToolConfig{} : bench::ToolConfig::from_json(read_json(c.config));
  if (c.seed) cfg.set_seed(*c.seed);
  return cfg;
}

fs::path out_dir(const Common & c)
{
  const fs::path p(c.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec || !fs::is_directory(p)) throw IoError("cannot create output directory " + p.string());
  return p;
}

// Exposure window and reference time shared by deblur and restore.
struct Timing
{
  std::string meta;
  std::optional<int64_t> start;
  std::optional<int64_t> end;
  std::optional<int64_t> t_ref;
};

void add_timing(CLI::App * cmd, Timing & t)
{
  cmd->add_option("--meta", t.meta, "meta.json written by simulate");
  cmd->add_option("--exposure-start", t.start, "exposure start, microseconds");
  cmd->add_option("--exposure-end", t.end, "exposure end, microseconds");
  cmd->add_option("--t-ref", t.t_ref, "reference instant, microseconds");
}

restore::RestoreConfig resolve_restore(const bench::ToolConfig & cfg, const Timing & t)
{
  formation::ExposureWindow w{cfg.turbulence.exposure_start(), cfg.turbulence.exposure_end()};
  std::optional<int64_t> ref = cfg.turbulence.latent_timestamp(cfg.turbulence.reference_index());
  if (!t.meta.empty()) {
    const json m = read_json(t.meta);
    try {
      w.start = m.at("exposure_start").get<int64_t>();
      w.end = m.at("exposure_end").get<int64_t>();
      ref = m.at("t_ref").get<int64_t>();
    } catch (const json::exception & e) {
      throw FormatError(std::string("meta: ") + e.what());
    }
  }
  if (t.start) w.start = *t.start;
  if (t.end) w.end = *t.end;
  restore::RestoreConfig r = cfg.restore_for(w, ref);
  if (t.t_ref) r.t_ref = *t.t_ref;
  r.validate();
  return r;
}

void write_text(const std::string & text, const fs::path & path)
{
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write " + path.string());
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

json levels_json(const std::vector<restore::LevelTrace> & levels)
{
  json list = json::array();
  for (const auto & l : levels) {
    list.push_back(
      {{"level", l.level},
       {"width", l.width},
       {"height", l.height},
       {"data_residual", l.data_residual},
       {"halvings", l.halvings}});
  }
  return list;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"tevkit: event-guided turbulence simulation, restoration and benchmarking"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  Common c_gen, c_sim, c_ev, c_deb, c_var, c_det, c_res, c_eval;

  auto * gen = app.add_subcommand("gen-dataset", "synthesize a turbulent dataset with events");
  add_common(gen, c_gen);
  std::string gen_clean;
  int gen_synthetic = 0;
  int gen_scene_size = 0;
  gen->add_option("--clean", gen_clean, "directory of clean images");
  gen->add_option("--synthetic", gen_synthetic, "generate this many synthetic clean scenes instead");
  gen->add_option("--scene-size", gen_scene_size, "synthetic scene size (default: dataset size)");

  auto * sim = app.add_subcommand("simulate", "render one turbulent exposure and its events");
  add_common(sim, c_sim);
  std::string sim_clean;
  bool sim_latents = false;
  sim->add_option("--clean", sim_clean, "clean image")->required();
  sim->add_flag("--latents", sim_latents, "also write the latent frames");

  auto * ev = app.add_subcommand("events", "simulate events from latent frames");
  add_common(ev, c_ev);
  std::vector<std::string> ev_frames;
  std::vector<int64_t> ev_times;
  bool ev_csv = false;
  ev->add_option("--frames", ev_frames, "latent frames in time order")->required();
  ev->add_option("--timestamps", ev_times, "frame timestamps in microseconds (default: latent slots)");
  ev->add_flag("--csv", ev_csv, "also write events.csv");

  auto * deb = app.add_subcommand("deblur", "event-based double integral deblurring");
  add_common(deb, c_deb);
  std::string deb_image, deb_events;
  Timing deb_t;
  deb->add_option("--image", deb_image, "blurred frame")->required();
  deb->add_option("--events", deb_events, "event stream (EVTB or CSV)")->required();
  add_timing(deb, deb_t);

  auto * var = app.add_subcommand("variance", "normalized accumulated-event variance map");
  add_common(var, c_var);
  std::string var_events;
  int var_w = 0, var_h = 0;
  var->add_option("--events", var_events, "event stream")->required();
  var->add_option("--width", var_w, "sensor width for CSV input");
  var->add_option("--height", var_h, "sensor height for CSV input");

  auto * det = app.add_subcommand("detilt", "estimate tilt flow and warp");
  add_common(det, c_det);
  std::string det_image, det_ref, det_var;
  det->add_option("--image", det_image, "deblurred frame")->required();
  det->add_option("--reference", det_ref, "reference frame")->required();
  det->add_option("--variance", det_var, "variance map (zeros when absent)");

  auto * res = app.add_subcommand("restore", "full restoration pipeline");
  add_common(res, c_res);
  std::string res_image, res_events;
  Timing res_t;
  res->add_option("--image", res_image, "turbulent frame")->required();
  res->add_option("--events", res_events, "event stream")->required();
  add_timing(res, res_t);

  auto * evl = app.add_subcommand("eval", "restore the test split and score it");
  add_common(evl, c_eval);
  std::string eval_manifest;
  evl->add_option("--manifest", eval_manifest, "manifest.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitValidation;
  }
  set_thread_count(threads);

  try {
    if (*gen) {
      const auto cfg = load_config(c_gen);
      const uint64_t seed = c_gen.seed.value_or(0);
      const fs::path out = out_dir(c_gen);
      fs::path clean_dir = gen_clean;
      if (gen_synthetic > 0) {
        if (!gen_clean.empty()) throw ArgumentError("--clean and --synthetic are exclusive");
        clean_dir = out / "source";
        bench::write_synthetic_scenes(clean_dir, gen_synthetic, gen_scene_size > 0 ? gen_scene_size : cfg.dataset.size, seed);
      } else if (gen_clean.empty()) {
        throw ArgumentError("gen-dataset needs --clean or --synthetic");
      }
      const auto m = bench::gen_dataset(clean_dir, out, cfg, seed);
      std::printf("%zu entries (%zu train, %zu test) -> %s\n", m.entries.size(), m.train.size(), m.test.size(),
        (out / bench::kManifestName).string().c_str());
    } else if (*sim) {
      const auto cfg = load_config(c_sim);
      const fs::path out = out_dir(c_sim);
      const Image clean = read_image(sim_clean).luminance();
      Rng rng(cfg.turbulence.seed, 0);
      const auto r = turbsim::render_turbulent(clean, cfg.turbulence, rng);
      const auto s = evsim::simulate_events(r.latents, cfg.event_sim);
      write_pfm(r.turbulent, out / "turbulent.pfm");
      write_events(s.stream, out / "events.evtb");
      write_flow(r.tilt_ref, out / "tilt_ref.pfm");
      write_pfm(s.threshold_map, out / "threshold_map.pfm");
      if (sim_latents) {
        for (std::size_t k = 0; k < r.latents.frames.size(); ++k) {
          char name[32];
          std::snprintf(name, sizeof(name), "latent_%02zu.pfm", k);
          write_pfm(r.latents.frames[k], out / name);
        }
      }
      write_json(
        {{"exposure_start", r.latents.exposure_start},
         {"exposure_end", r.latents.exposure_end},
         {"t_ref", r.latents.timestamps[r.reference_index]},
         {"timestamps", r.latents.timestamps},
         {"events", s.stream.size()}},
        out / "meta.json");
      std::printf("%zu events -> %s\n", s.stream.size(), out.string().c_str());
    } else if (*ev) {
      const auto cfg = load_config(c_ev);
      const fs::path out = out_dir(c_ev);
      FrameSequence seq;
      for (const auto & f : ev_frames) seq.frames.push_back(read_image(f).luminance());
      if (ev_times.empty()) {
        for (std::size_t k = 0; k < ev_frames.size(); ++k) {
          seq.timestamps.push_back(cfg.turbulence.latent_timestamp(static_cast<int>(k)));
        }
      } else {
        seq.timestamps = ev_times;
      }
      if (seq.frames.size() != seq.timestamps.size()) throw ArgumentError("--frames and --timestamps counts differ");
      seq.exposure_start = std::min<int64_t>(0, seq.timestamps.front());
      seq.exposure_end = seq.timestamps.back();
      const auto s = evsim::simulate_events(seq, cfg.event_sim);
      write_events(s.stream, out / "events.evtb");
      if (ev_csv) write_events_csv(s.stream, out / "events.csv");
      std::printf("%zu events -> %s\n", s.stream.size(), out.string().c_str());
    } else if (*deb) {
      const auto cfg = load_config(c_deb);
      const fs::path out = out_dir(c_deb);
      const Image img = read_image(deb_image);
      const EventStream events = read_events(deb_events, img.width, img.height);
      const auto rc = resolve_restore(cfg, deb_t);
      const auto contrast = formation::Contrast::uniform(rc.c);
      const auto e = formation::blur_map(events, contrast, rc.exposure, rc.reference_time(), cfg.n_samples);
      write_pfm(restore::deblur(img, events, rc), out / "deblurred.pfm");
      write_pfm(e.to_image(), out / "blur_map.pfm");
    } else if (*var) {
      const auto cfg = load_config(c_var);
      const fs::path out = out_dir(c_var);
      const EventStream events = read_events(var_events, var_w, var_h);
      const double cc = cfg.c_override.value_or(cfg.event_sim.c_mean);
      const auto v = formation::variance_map(events, formation::Contrast::uniform(cc), cfg.restore.accum_mode);
      write_pfm(v.to_image(), out / "variance.pfm");
    } else if (*det) {
      const auto cfg = load_config(c_det);
      const fs::path out = out_dir(c_det);
      const Image coarse = read_image(det_image);
      const Image ref = read_image(det_ref);
      formation::VarianceMap v{coarse.width, coarse.height, std::vector<double>(coarse.pixel_count(), 0.0)};
      if (!det_var.empty()) {
        const Image vi = read_image(det_var);
        if (!vi.same_size(coarse) || vi.channels != 1) throw ArgumentError("variance map size differs");
        v.v = vi.data;
      }
      const auto fr = restore::estimate_tilt_flow_traced(coarse, ref, v, cfg.restore.flow);
      write_flow(fr.flow, out / "flow.pfm");
      write_pfm(restore::warp_refine(coarse, fr.flow), out / "refined.pfm");
      write_json({{"levels", levels_json(fr.levels)}}, out / "flow_trace.json");
    } else if (*res) {
      const auto cfg = load_config(c_res);
      const fs::path out = out_dir(c_res);
      const Image img = read_image(res_image);
      const EventStream events = read_events(res_events, img.width, img.height);
      const auto rc = resolve_restore(cfg, res_t);
      const auto r = restore::restore_pipeline(img, events, rc);
      write_pfm(r.coarse, out / "coarse.pfm");
      write_pfm(r.reference, out / "reference.pfm");
      write_pfm(r.variance.to_image(), out / "variance.pfm");
      write_flow(r.flow, out / "flow.pfm");
      write_pfm(r.refined, out / "refined.pfm");
      write_json(
        {{"tool_version", bench::kToolVersion},
         {"config", cfg.to_json()},
         {"exposure", {rc.exposure.start, rc.exposure.end}},
         {"t_ref", rc.reference_time()},
         {"levels", levels_json(r.levels)}},
        out / "restore.json");
      json t = json::object();
      for (const auto & [k, ms] : r.timings_ms) t[k] = ms;
      write_json({{"stages_ms", t}, {"threads", thread_count()}}, out / "timings.json");
    } else if (*evl) {
      const auto cfg = load_config(c_eval);
      const fs::path out = out_dir(c_eval);
      const fs::path mpath(eval_manifest);
      const auto manifest = bench::DatasetManifest::from_json(read_json(mpath));
      auto report = bench::run_eval(manifest, mpath.parent_path(), cfg);
      write_json(report.to_json(), out / "report.json");
      write_text(report.to_csv(), out / "report.csv");
      write_json(report.timings_json, out / "timings.json");
      std::printf(
        "%zu test images: PSNR %.3f -> %.3f dB (gain %.3f, floor %.3f)\n", report.rows.size(), report.psnr_turb.mean,
        report.psnr_restored.mean, report.psnr_gain, cfg.eval.psnr_gain_floor);
      if (cfg.eval.enforce_floor && !report.floor_ok) {
        std::fprintf(stderr, "acceptance floor violated\n");
        return kExitFloor;
      }
    }
  } catch (const NumericError & e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const Error & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const nlohmann::json::exception & e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitOk;
}
