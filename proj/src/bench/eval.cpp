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

#include "tevkit/eval.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tevkit/error.hpp"
#include "tevkit/io.hpp"
#include "tevkit/metrics.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/restore.hpp"
#include "tevkit/turbsim.hpp"

namespace fs = std::filesystem;

namespace tevkit::bench
{
namespace
{
using nlohmann::json;

json psnr_value(double v)
{
  if (is_identical(v)) return "identical";
  return v;
}

json aggregate_json(const Aggregate & a, bool with_identical)
{
  json j = {{"mean", a.mean}, {"std", a.std}, {"count", a.count}};
  if (with_identical) j["identical"] = a.identical;
  return j;
}

std::string csv_number(double v)
{
  if (is_identical(v)) return "identical";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

Aggregate aggregate(const std::vector<double> & values)
{
  Aggregate a;
  double sum = 0.0;
  for (double v : values) {
    if (is_identical(v)) {
      ++a.identical;
    } else {
      sum += v;
      ++a.count;
    }
  }
  if (a.count == 0) return a;
  a.mean = sum / a.count;
  double ss = 0.0;
  for (double v : values) {
    if (!is_identical(v)) ss += (v - a.mean) * (v - a.mean);
  }
  a.std = std::sqrt(ss / a.count);
  return a;
}

void EvalReport::recompute()
{
  std::vector<double> pt, pr, st, sr, ep;
  double gain_sum = 0.0;
  int gain_n = 0;
  int restored_identical = 0;
  for (const auto & r : rows) {
    pt.push_back(r.psnr_turb);
    pr.push_back(r.psnr_restored);
    st.push_back(r.ssim_turb);
    sr.push_back(r.ssim_restored);
    if (r.epe) ep.push_back(*r.epe);
    if (!is_identical(r.psnr_turb) && !is_identical(r.psnr_restored)) {
      gain_sum += r.psnr_restored - r.psnr_turb;
      ++gain_n;
    } else if (is_identical(r.psnr_restored)) {
      ++restored_identical;
    }
  }
  psnr_turb = aggregate(pt);
  psnr_restored = aggregate(pr);
  ssim_turb = aggregate(st);
  ssim_restored = aggregate(sr);
  epe = aggregate(ep);
  if (gain_n > 0) {
    psnr_gain = gain_sum / gain_n;
  } else {
    // nothing left to gain when the restored images are exact
    psnr_gain = restored_identical > 0 ? kIdentical : 0.0;
  }
}

json EvalReport::to_json() const
{
  json doc;
  doc["format"] = kReportFormat;
  doc["tool_version"] = kToolVersion;
  doc["config"] = config;
  json list = json::array();
  for (const auto & r : rows) {
    json j = {
      {"id", r.id},
      {"psnr_turb", psnr_value(r.psnr_turb)},
      {"psnr_restored", psnr_value(r.psnr_restored)},
      {"ssim_turb", r.ssim_turb},
      {"ssim_restored", r.ssim_restored}};
    j["epe"] = r.epe ? json(*r.epe) : json(nullptr);
    list.push_back(j);
  }
  doc["rows"] = list;
  doc["aggregates"] = {
    {"psnr_turb", aggregate_json(psnr_turb, true)},
    {"psnr_restored", aggregate_json(psnr_restored, true)},
    {"ssim_turb", aggregate_json(ssim_turb, false)},
    {"ssim_restored", aggregate_json(ssim_restored, false)},
    {"epe", aggregate_json(epe, false)}};
  doc["psnr_gain"] = psnr_value(psnr_gain);
  doc["floor_ok"] = floor_ok;
  return doc;
}

std::string EvalReport::to_csv() const
{
  std::ostringstream os;
  os << "id,psnr_turb,psnr_restored,ssim_turb,ssim_restored,epe\n";
  for (const auto & r : rows) {
    os << r.id << ',' << csv_number(r.psnr_turb) << ',' << csv_number(r.psnr_restored) << ','
       << csv_number(r.ssim_turb) << ',' << csv_number(r.ssim_restored) << ',' << (r.epe ? csv_number(*r.epe) : "")
       << '\n';
  }
  return os.str();
}

EvalReport run_eval(const DatasetManifest & manifest, const fs::path & base_dir, const ToolConfig & cfg)
{
  manifest.validate(base_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const int n = static_cast<int>(manifest.test.size());
  EvalReport report;
  report.rows.resize(n);
  std::vector<json> timings(n);

  parallel_rows(n, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      const ManifestEntry & e = manifest.entry(manifest.test[i]);
      const Image clean = read_image(base_dir / e.clean_path);
      const Image turbulent = read_image(base_dir / e.turbulent_path);
      const EventStream events = read_events(base_dir / e.events_path);
      const auto rc = cfg.restore_for({e.exposure_start, e.exposure_end}, e.t_ref);
      const auto rep = restore::restore_pipeline(turbulent, events, rc);

      EvalRow & row = report.rows[i];
      row.id = e.id;
      row.psnr_turb = psnr(turbulent, clean);
      row.psnr_restored = psnr(rep.refined, clean);
      row.ssim_turb = ssim(turbulent, clean);
      row.ssim_restored = ssim(rep.refined, clean);
      if (!e.tilt_ref_path.empty()) {
        const TiltFlow truth = turbsim::invert_flow(read_flow(base_dir / e.tilt_ref_path));
        row.epe = endpoint_error(rep.flow, truth);
      }
      json t = json::object();
      for (const auto & [stage, ms] : rep.timings_ms) t[stage] = ms;
      timings[i] = {{"id", e.id}, {"stages_ms", t}};
    }
  });

  report.config = cfg.to_json();
  report.recompute();
  report.floor_ok = report.psnr_gain >= cfg.eval.psnr_gain_floor;
  const double total_ms =
    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  report.timings_json = {{"total_ms", total_ms}, {"threads", thread_count()}, {"entries", timings}};
  return report;
}

}  // namespace tevkit::bench
