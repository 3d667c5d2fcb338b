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

#ifndef TEVKIT_RESTORE_HPP
#define TEVKIT_RESTORE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tevkit/events.hpp"
#include "tevkit/formation.hpp"
#include "tevkit/image.hpp"

namespace tevkit::restore
{
struct FlowSolverParams
{
  int levels{3};            // pyramid depth above the finest solved level
  int iters_per_level{10};  // Gauss-Newton iterations
  double alpha{0.01};       // smoothness weight
  double kappa{4.0};        // variance coupling in w = 1 / (1 + kappa V)
  int min_level_size{8};    // coarsest level keeps at least this many pixels per side
  int finest_level{1};      // flow is solved down to 1/2^finest_level resolution, then upsampled
  int inner_sweeps{40};     // red-black Gauss-Seidel sweeps per linearization
  int max_halvings{5};
  double presmooth{1.2};    // Gaussian pre-filter std applied to both inputs, pixels

  void validate() const;
};

struct RestoreConfig
{
  double c{0.2};
  double lambda{0.0};
  // Reference instant of the deblurred image; exposure midpoint when unset.
  std::optional<int64_t> t_ref;
  formation::ExposureWindow exposure{0, 100000};
  formation::AccumMode accum_mode{formation::AccumMode::literal_sum};
  int m_latents{16};
  double output_max{1.5};
  FlowSolverParams flow;

  int64_t reference_time() const { return t_ref.value_or(exposure.mid()); }
  void validate() const;
};

// Data-term history of one pyramid level, first entry before any update.
struct LevelTrace
{
  int level{0};
  int width{0};
  int height{0};
  std::vector<double> data_residual;
  int halvings{0};
};

struct FlowResult
{
  TiltFlow flow;
  std::vector<LevelTrace> levels;
};

struct RestorationReport
{
  Image coarse;
  Image reference;
  formation::VarianceMap variance;
  TiltFlow flow;
  Image refined;
  std::vector<LevelTrace> levels;
  std::map<std::string, double> timings_ms;
};

// Least-squares blur removal: edi_reconstruct against the event blur map,
// with E clamped to the floor, output clamped to [0, output_max].
Image deblur(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg);

// Per-pixel mean of m_latents event-reconstructed latents at uniform
// instants across the exposure. Zero-mean tilt cancels to first order, so
// this is a blurred but geometrically centred target.
Image reference_frame(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg);

// Coarse-to-fine variance-weighted registration of coarse onto reference.
//
// Minimizes sum w (coarse(x + M) - reference)^2 + alpha (|grad u|^2 + |grad v|^2)
// with w = 1 / (1 + kappa V). Each Gauss-Newton linearization is solved by
// red-black Gauss-Seidel on per-pixel 2x2 systems; a step that raises the
// weighted data residual is halved up to max_halvings times and otherwise
// rejected, ending the level. Both images are divided by the mean of the
// reference first, so the result is invariant to a common intensity scale.
FlowResult estimate_tilt_flow_traced(
  const Image & coarse, const Image & reference, const formation::VarianceMap & vmap,
  const FlowSolverParams & params);

TiltFlow estimate_tilt_flow(
  const Image & coarse, const Image & reference, const formation::VarianceMap & vmap,
  const FlowSolverParams & params);

Image warp_refine(const Image & coarse, const TiltFlow & flow);

RestorationReport restore_pipeline(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg);

}  // namespace tevkit::restore

#endif  // TEVKIT_RESTORE_HPP
