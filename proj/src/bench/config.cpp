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

#include "tevkit/config.hpp"

#include <cstdio>
#include <set>

#include "tevkit/error.hpp"

namespace tevkit::bench
{
namespace
{
using nlohmann::json;

void check_keys(const json & block, const char * name, const std::set<std::string> & allowed)
{
  if (!block.is_object()) throw ValidationError(std::string("config block '") + name + "' must be an object");
  for (const auto & item : block.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(std::string("unknown key '") + item.key() + "' in config block '" + name + "'");
    }
  }
}

template <typename T>
void get(const json & block, const char * key, T & out)
{
  if (!block.contains(key)) return;
  try {
    out = block.at(key).get<T>();
  } catch (const json::exception & e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

formation::AccumMode parse_mode(const std::string & s)
{
  if (s == "literal_sum") return formation::AccumMode::literal_sum;
  if (s == "cumulative_product") return formation::AccumMode::cumulative_product;
  throw ValidationError("accum_mode must be literal_sum or cumulative_product");
}

const char * mode_name(formation::AccumMode m)
{
  return m == formation::AccumMode::literal_sum ? "literal_sum" : "cumulative_product";
}

}  // namespace

ToolConfig ToolConfig::from_json(const json & doc)
{
  ToolConfig cfg;
  if (doc.is_null()) return cfg;
  check_keys(doc, "root", {"turbulence", "event_sim", "formation", "restore", "dataset", "eval"});

  if (doc.contains("turbulence")) {
    const json & b = doc["turbulence"];
    check_keys(
      b, "turbulence",
      {"sigma_tilt", "rho", "tau_corr", "sigma_blur0", "sigma_noise", "n_latents", "fps_latent", "zero_mean_tilt",
       "seed"});
    auto & t = cfg.turbulence;
    get(b, "sigma_tilt", t.sigma_tilt);
    get(b, "rho", t.rho);
    get(b, "tau_corr", t.tau_corr);
    get(b, "sigma_blur0", t.sigma_blur0);
    get(b, "sigma_noise", t.sigma_noise);
    get(b, "n_latents", t.n_latents);
    get(b, "fps_latent", t.fps_latent);
    get(b, "zero_mean_tilt", t.zero_mean_tilt);
    get(b, "seed", t.seed);
  }
  if (doc.contains("event_sim")) {
    const json & b = doc["event_sim"];
    check_keys(
      b, "event_sim",
      {"c_mean", "c_std", "c_min", "c_max", "temporal_jitter_std", "seed", "refractory_us", "noise_rate_hz"});
    auto & m = cfg.event_sim;
    get(b, "c_mean", m.c_mean);
    get(b, "c_std", m.c_std);
    get(b, "c_min", m.c_min);
    get(b, "c_max", m.c_max);
    get(b, "temporal_jitter_std", m.temporal_jitter_std);
    get(b, "seed", m.seed);
    get(b, "refractory_us", m.refractory_us);
    get(b, "noise_rate_hz", m.noise_rate_hz);
  }
  if (doc.contains("formation")) {
    const json & b = doc["formation"];
    check_keys(b, "formation", {"c", "lambda", "t_ref", "accum_mode", "n_samples"});
    if (b.contains("c")) {
      double c = 0.0;
      get(b, "c", c);
      cfg.c_override = c;
    }
    get(b, "lambda", cfg.restore.lambda);
    if (b.contains("t_ref")) {
      const json & t = b["t_ref"];
      if (t.is_string()) {
        if (t.get<std::string>() != "mid") throw ValidationError("formation.t_ref must be \"mid\" or microseconds");
        cfg.t_ref_mode = "mid";
      } else if (t.is_number_integer()) {
        cfg.t_ref_mode = std::to_string(t.get<int64_t>());
      } else {
        throw ValidationError("formation.t_ref must be \"mid\" or microseconds");
      }
    }
    if (b.contains("accum_mode")) {
      std::string m;
      get(b, "accum_mode", m);
      cfg.restore.accum_mode = parse_mode(m);
    }
    get(b, "n_samples", cfg.n_samples);
  }
  if (doc.contains("restore")) {
    const json & b = doc["restore"];
    check_keys(
      b, "restore",
      {"lambda", "m_latents", "levels", "iters_per_level", "alpha", "kappa", "finest_level", "min_level_size",
       "inner_sweeps", "max_halvings", "output_max", "presmooth"});
    auto & r = cfg.restore;
    get(b, "lambda", r.lambda);
    get(b, "m_latents", r.m_latents);
    get(b, "output_max", r.output_max);
    get(b, "levels", r.flow.levels);
    get(b, "iters_per_level", r.flow.iters_per_level);
    get(b, "alpha", r.flow.alpha);
    get(b, "kappa", r.flow.kappa);
    get(b, "finest_level", r.flow.finest_level);
    get(b, "min_level_size", r.flow.min_level_size);
    get(b, "inner_sweeps", r.flow.inner_sweeps);
    get(b, "max_halvings", r.flow.max_halvings);
    get(b, "presmooth", r.flow.presmooth);
  }
  if (doc.contains("dataset")) {
    const json & b = doc["dataset"];
    check_keys(b, "dataset", {"size", "test_fraction"});
    get(b, "size", cfg.dataset.size);
    get(b, "test_fraction", cfg.dataset.test_fraction);
  }
  if (doc.contains("eval")) {
    const json & b = doc["eval"];
    check_keys(b, "eval", {"psnr_gain_floor", "enforce_floor"});
    get(b, "psnr_gain_floor", cfg.eval.psnr_gain_floor);
    get(b, "enforce_floor", cfg.eval.enforce_floor);
  }

  cfg.turbulence.validate();
  cfg.event_sim.validate();
  cfg.restore.flow.validate();
  if (cfg.dataset.size < 1) throw ValidationError("dataset.size must be >= 1");
  if (!(cfg.dataset.test_fraction > 0.0 && cfg.dataset.test_fraction < 1.0)) {
    throw ValidationError("dataset.test_fraction must lie in (0, 1)");
  }
  if (cfg.n_samples < 1) throw ValidationError("formation.n_samples must be >= 1");
  if (cfg.c_override && !(*cfg.c_override > 0.0)) throw ValidationError("formation.c must be > 0");
  return cfg;
}

json ToolConfig::to_json() const
{
  const auto & t = turbulence;
  const auto & m = event_sim;
  const auto & r = restore;
  json doc;
  doc["turbulence"] = {
    {"sigma_tilt", t.sigma_tilt}, {"rho", t.rho},           {"tau_corr", t.tau_corr},
    {"sigma_blur0", t.sigma_blur0}, {"sigma_noise", t.sigma_noise}, {"n_latents", t.n_latents},
    {"fps_latent", t.fps_latent}, {"zero_mean_tilt", t.zero_mean_tilt}, {"seed", t.seed}};
  doc["event_sim"] = {
    {"c_mean", m.c_mean}, {"c_std", m.c_std}, {"c_min", m.c_min}, {"c_max", m.c_max},
    {"temporal_jitter_std", m.temporal_jitter_std}, {"seed", m.seed}, {"refractory_us", m.refractory_us},
    {"noise_rate_hz", m.noise_rate_hz}};
  json f = {{"lambda", r.lambda}, {"accum_mode", mode_name(r.accum_mode)}, {"n_samples", n_samples}};
  f["c"] = c_override ? json(*c_override) : json(nullptr);
  if (!t_ref_mode) {
    f["t_ref"] = nullptr;
  } else if (*t_ref_mode == "mid") {
    f["t_ref"] = "mid";
  } else {
    f["t_ref"] = std::stoll(*t_ref_mode);
  }
  doc["formation"] = f;
  doc["restore"] = {
    {"lambda", r.lambda},
    {"m_latents", r.m_latents},
    {"output_max", r.output_max},
    {"levels", r.flow.levels},
    {"iters_per_level", r.flow.iters_per_level},
    {"alpha", r.flow.alpha},
    {"kappa", r.flow.kappa},
    {"finest_level", r.flow.finest_level},
    {"min_level_size", r.flow.min_level_size},
    {"inner_sweeps", r.flow.inner_sweeps},
    {"max_halvings", r.flow.max_halvings},
    {"presmooth", r.flow.presmooth}};
  doc["dataset"] = {{"size", dataset.size}, {"test_fraction", dataset.test_fraction}};
  doc["eval"] = {{"psnr_gain_floor", eval.psnr_gain_floor}, {"enforce_floor", eval.enforce_floor}};
  return doc;
}

void ToolConfig::set_seed(uint64_t seed)
{
  turbulence.seed = seed;
  event_sim.seed = seed;
}

restore::RestoreConfig ToolConfig::restore_for(
  const formation::ExposureWindow & exposure, std::optional<int64_t> ref_latent_t) const
{
  restore::RestoreConfig r = restore;
  r.exposure = exposure;
  r.c = c_override.value_or(event_sim.c_mean);
  if (!t_ref_mode) {
    r.t_ref = ref_latent_t;
  } else if (*t_ref_mode == "mid") {
    r.t_ref.reset();
  } else {
    r.t_ref = std::stoll(*t_ref_mode);
  }
  return r;
}

std::string fnv1a_hex(const std::string & text)
{
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace tevkit::bench
