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

#ifndef TEVKIT_CONFIG_HPP
#define TEVKIT_CONFIG_HPP

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tevkit/restore.hpp"
#include "tevkit/threshold_model.hpp"
#include "tevkit/turbsim.hpp"

namespace tevkit::bench
{
struct DatasetConfig
{
  int size{592};
  double test_fraction{0.1};
};

struct EvalConfig
{
  double psnr_gain_floor{2.0};
  bool enforce_floor{true};
};

// Everything a CLI run can configure. Blocks missing from the JSON keep
// their defaults; unknown keys inside a known block are rejected.
struct ToolConfig
{
  turbsim::TurbulenceParams turbulence;
  ThresholdModel event_sim;
  restore::RestoreConfig restore;
  // "mid", a number of microseconds, or unset meaning "use the dataset's
  // reference latent time when known, else mid".
  std::optional<std::string> t_ref_mode;
  std::optional<double> c_override;
  int n_samples{64};  // grid-mode blur map samples
  DatasetConfig dataset;
  EvalConfig eval;

  static ToolConfig from_json(const nlohmann::json & doc);
  nlohmann::json to_json() const;
  // Applies a seed to turbulence and event simulation.
  void set_seed(uint64_t seed);
  // Restore settings for an exposure window and a known reference latent time.
  restore::RestoreConfig restore_for(const formation::ExposureWindow & exposure, std::optional<int64_t> ref_latent_t) const;
};

// Stable 64-bit FNV-1a of a string, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string & text);

}  // namespace tevkit::bench

#endif  // TEVKIT_CONFIG_HPP
