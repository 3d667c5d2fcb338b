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

#ifndef TEVKIT_EVAL_HPP
#define TEVKIT_EVAL_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tevkit/config.hpp"
#include "tevkit/dataset.hpp"

namespace tevkit::bench
{
inline constexpr const char * kToolVersion = "0.3.0";
inline constexpr int kReportFormat = 1;

struct EvalRow
{
  std::string id;
  double psnr_turb{0.0};
  double psnr_restored{0.0};
  double ssim_turb{0.0};
  double ssim_restored{0.0};
  std::optional<double> epe;
};

struct Aggregate
{
  double mean{0.0};
  double std{0.0};
  int count{0};      // finite values aggregated
  int identical{0};  // PSNR rows equal to the identical sentinel
};

struct EvalReport
{
  std::vector<EvalRow> rows;
  Aggregate psnr_turb;
  Aggregate psnr_restored;
  Aggregate ssim_turb;
  Aggregate ssim_restored;
  Aggregate epe;
  double psnr_gain{0.0};
  bool floor_ok{true};
  nlohmann::json config;

  void recompute();
  // Deterministic content only; wall-clock data lives in timings_json.
  nlohmann::json to_json() const;
  nlohmann::json timings_json;
  std::string to_csv() const;
};

Aggregate aggregate(const std::vector<double> & values);

// Restores every test entry, scores it against its clean image and checks
// the PSNR gain floor.
EvalReport run_eval(const DatasetManifest & manifest, const std::filesystem::path & base_dir, const ToolConfig & cfg);

}  // namespace tevkit::bench

#endif  // TEVKIT_EVAL_HPP
