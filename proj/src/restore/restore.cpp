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

#include "tevkit/restore.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "tevkit/error.hpp"
#include "tevkit/parallel.hpp"
#include "tevkit/turbsim.hpp"

namespace tevkit::restore
{
using formation::BlurMap;
using formation::Contrast;
using formation::VarianceMap;

void FlowSolverParams::validate() const
{
  if (levels < 1) throw ValidationError("flow levels must be >= 1");
  if (iters_per_level < 1) throw ValidationError("iters_per_level must be >= 1");
  if (!(alpha > 0.0)) throw ValidationError("alpha must be > 0");
  if (!(kappa >= 0.0)) throw ValidationError("kappa must be >= 0");
  if (min_level_size < 1) throw ValidationError("min_level_size must be >= 1");
  if (finest_level < 0) throw ValidationError("finest_level must be >= 0");
  if (inner_sweeps < 1) throw ValidationError("inner_sweeps must be >= 1");
  if (max_halvings < 0) throw ValidationError("max_halvings must be >= 0");
  if (!(presmooth >= 0.0)) throw ValidationError("presmooth must be >= 0");
}

void RestoreConfig::validate() const
{
  if (!(c > 0.0)) throw ValidationError("contrast threshold c must be > 0");
  if (!(lambda >= 0.0)) throw ValidationError("lambda must be >= 0");
  if (exposure.end <= exposure.start) throw ValidationError("exposure window is empty");
  const int64_t tr = reference_time();
  if (tr < exposure.start || tr > exposure.end) throw ValidationError("t_ref lies outside the exposure window");
  if (m_latents < 1) throw ValidationError("m_latents must be >= 1");
  if (!(output_max > 0.0)) throw ValidationError("output_max must be > 0");
  flow.validate();
}

namespace
{
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Row-major single-channel grid.
struct Grid
{
  int w{0};
  int h{0};
  std::vector<double> d;

  Grid() = default;
  Grid(int w_, int h_, double fill = 0.0) : w(w_), h(h_), d(std::size_t(w_) * h_, fill) {}
  double & operator()(int x, int y) { return d[std::size_t(y) * w + x]; }
  double operator()(int x, int y) const { return d[std::size_t(y) * w + x]; }
};

Grid downsample(const Grid & g)
{
  Grid out((g.w + 1) / 2, (g.h + 1) / 2);
  for (int y = 0; y < out.h; ++y) {
    const int ya = 2 * y;
    const int yb = std::min(2 * y + 1, g.h - 1);
    for (int x = 0; x < out.w; ++x) {
      const int xa = 2 * x;
      const int xb = std::min(2 * x + 1, g.w - 1);
      out(x, y) = 0.25 * (g(xa, ya) + g(xb, ya) + g(xa, yb) + g(xb, yb));
    }
  }
  return out;
}

double sample(const Grid & g, double sx, double sy)
{
  sx = std::clamp(sx, 0.0, double(g.w - 1));
  sy = std::clamp(sy, 0.0, double(g.h - 1));
  const int x0 = static_cast<int>(sx);
  const int y0 = static_cast<int>(sy);
  const int x1 = std::min(x0 + 1, g.w - 1);
  const int y1 = std::min(y0 + 1, g.h - 1);
  const double fx = sx - x0;
  const double fy = sy - y0;
  const double top = (1.0 - fx) * g(x0, y0) + fx * g(x1, y0);
  const double bot = (1.0 - fx) * g(x0, y1) + fx * g(x1, y1);
  return (1.0 - fy) * top + fy * bot;
}

// Bilinear resampling of a flow component onto a (w, h) grid, rescaled by
// the size ratio.
Grid upsample_flow(const Grid & g, int w, int h, bool horizontal)
{
  Grid out(w, h);
  const double sx = double(g.w) / w;
  const double sy = double(g.h) / h;
  const double gain = horizontal ? double(w) / g.w : double(h) / g.h;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      out(x, y) = gain * sample(g, (x + 0.5) * sx - 0.5, (y + 0.5) * sy - 0.5);
    }
  }
  return out;
}

void gradients(const Grid & g, Grid & gx, Grid & gy)
{
  gx = Grid(g.w, g.h);
  gy = Grid(g.w, g.h);
  for (int y = 0; y < g.h; ++y) {
    for (int x = 0; x < g.w; ++x) {
      const int xl = std::max(x - 1, 0);
      const int xr = std::min(x + 1, g.w - 1);
      const int yu = std::max(y - 1, 0);
      const int yd = std::min(y + 1, g.h - 1);
      gx(x, y) = xr > xl ? (g(xr, y) - g(xl, y)) / (xr - xl) : 0.0;
      gy(x, y) = yd > yu ? (g(x, yd) - g(x, yu)) / (yd - yu) : 0.0;
    }
  }
}

// Weighted squared residual, summed per row and then in row order.
double data_residual(const Grid & moving, const Grid & target, const Grid & weight, const Grid & u, const Grid & v)
{
  std::vector<double> rows(target.h, 0.0);
  parallel_rows(target.h, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      double acc = 0.0;
      for (int x = 0; x < target.w; ++x) {
        const double r = sample(moving, x + u(x, y), y + v(x, y)) - target(x, y);
        acc += weight(x, y) * r * r;
      }
      rows[y] = acc;
    }
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

Grid to_grid(const Image & img)
{
  Grid g(img.width, img.height);
  g.d = img.data;
  return g;
}

// One pyramid level of Gauss-Newton with halving line search.
LevelTrace solve_level(
  const Grid & moving, const Grid & target, const Grid & weight, Grid & u, Grid & v, const FlowSolverParams & p,
  int level)
{
  LevelTrace trace;
  trace.level = level;
  trace.width = target.w;
  trace.height = target.h;
  Grid gx;
  Grid gy;
  gradients(moving, gx, gy);
  const int w = target.w;
  const int h = target.h;
  const double alpha = p.alpha;

  double current = data_residual(moving, target, weight, u, v);
  trace.data_residual.push_back(current);
  for (int it = 0; it < p.iters_per_level; ++it) {
    // linearize around (u, v)
    Grid a11(w, h), a12(w, h), a22(w, h), b1(w, h), b2(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double sx = x + u(x, y);
        const double sy = y + v(x, y);
        const double ix = sample(gx, sx, sy);
        const double iy = sample(gy, sx, sy);
        const double r = sample(moving, sx, sy) - target(x, y);
        const double wt = weight(x, y);
        a11(x, y) = wt * ix * ix;
        a12(x, y) = wt * ix * iy;
        a22(x, y) = wt * iy * iy;
        b1(x, y) = -wt * ix * r;
        b2(x, y) = -wt * iy * r;
      }
    }
    Grid du(w, h), dv(w, h);
    for (int sweep = 0; sweep < p.inner_sweeps; ++sweep) {
      for (int color = 0; color < 2; ++color) {
        parallel_rows(h, [&](int y0, int y1) {
          for (int y = y0; y < y1; ++y) {
            for (int x = (y + color) % 2; x < w; x += 2) {
              double su = 0.0;
              double sv = 0.0;
              int n = 0;
              auto add = [&](int xx, int yy) {
                su += u(xx, yy) + du(xx, yy);
                sv += v(xx, yy) + dv(xx, yy);
                ++n;
              };
              if (x > 0) add(x - 1, y);
              if (x + 1 < w) add(x + 1, y);
              if (y > 0) add(x, y - 1);
              if (y + 1 < h) add(x, y + 1);
              const double m11 = a11(x, y) + alpha * n;
              const double m22 = a22(x, y) + alpha * n;
              const double m12 = a12(x, y);
              const double r1 = b1(x, y) - alpha * (n * u(x, y) - su);
              const double r2 = b2(x, y) - alpha * (n * v(x, y) - sv);
              const double det = m11 * m22 - m12 * m12;
              if (!(det > 0.0)) continue;
              du(x, y) = (m22 * r1 - m12 * r2) / det;
              dv(x, y) = (m11 * r2 - m12 * r1) / det;
            }
          }
        });
      }
    }
    for (std::size_t i = 0; i < du.d.size(); ++i) {
      if (!std::isfinite(du.d[i]) || !std::isfinite(dv.d[i])) {
        throw NumericError(
          "estimate_tilt_flow: non-finite update at level " + std::to_string(level) + ", iteration " +
          std::to_string(it));
      }
    }
    double step = 1.0;
    bool accepted = false;
    Grid cu(w, h), cv(w, h);
    for (int halving = 0; halving <= p.max_halvings; ++halving) {
      for (std::size_t i = 0; i < du.d.size(); ++i) {
        cu.d[i] = u.d[i] + step * du.d[i];
        cv.d[i] = v.d[i] + step * dv.d[i];
      }
      const double candidate = data_residual(moving, target, weight, cu, cv);
      if (!std::isfinite(candidate)) {
        throw NumericError(
          "estimate_tilt_flow: non-finite residual at level " + std::to_string(level) + ", iteration " +
          std::to_string(it));
      }
      if (candidate <= current) {
        u = std::move(cu);
        v = std::move(cv);
        current = candidate;
        accepted = true;
        break;
      }
      step *= 0.5;
      ++trace.halvings;
    }
    if (!accepted) break;
    trace.data_residual.push_back(current);
  }
  return trace;
}

}  // namespace

Image deblur(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg)
{
  cfg.validate();
  if (turbulent.width != events.width || turbulent.height != events.height) {
    throw ArgumentError("deblur: image and event sensor sizes differ");
  }
  BlurMap e = formation::blur_map(events, Contrast::uniform(cfg.c), cfg.exposure, cfg.reference_time());
  for (double & v : e.e) v = std::max(v, formation::kBlurFloor);
  Image out = formation::edi_reconstruct(turbulent, e, cfg.lambda);
  for (double & v : out.data) v = std::clamp(v, 0.0, cfg.output_max);
  return out;
}

Image reference_frame(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg)
{
  cfg.validate();
  const Contrast c = Contrast::uniform(cfg.c);
  const int64_t t_ref = cfg.reference_time();
  BlurMap e = formation::blur_map(events, c, cfg.exposure, t_ref);
  for (double & v : e.e) v = std::max(v, formation::kBlurFloor);
  const Image base = formation::edi_reconstruct(turbulent, e, cfg.lambda);

  const std::size_t n = base.data.size();
  std::vector<double> sum(n, 0.0);
  std::vector<double> lo(n, std::numeric_limits<double>::infinity());
  std::vector<double> hi(n, -std::numeric_limits<double>::infinity());
  const int nc = base.channels;
  const double span = static_cast<double>(cfg.exposure.duration());
  for (int j = 0; j < cfg.m_latents; ++j) {
    const int64_t t = cfg.exposure.start + std::llround((j + 0.5) * span / cfg.m_latents);
    const Image li = formation::event_integral(events, c, t_ref, t);
    for (std::size_t pix = 0; pix < li.data.size(); ++pix) {
      const double g = li.data[pix] == 0.0 ? 1.0 : std::exp(li.data[pix]);
      for (int ch = 0; ch < nc; ++ch) {
        const double v = base.data[pix * nc + ch] * g;
        sum[pix * nc + ch] += v;
        lo[pix * nc + ch] = std::min(lo[pix * nc + ch], v);
        hi[pix * nc + ch] = std::max(hi[pix * nc + ch], v);
      }
    }
  }
  Image out(base.width, base.height, nc);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = lo[i] == hi[i] ? lo[i] : sum[i] / cfg.m_latents;
    out.data[i] = std::clamp(mean, 0.0, cfg.output_max);
  }
  return out;
}

FlowResult estimate_tilt_flow_traced(
  const Image & coarse, const Image & reference, const VarianceMap & vmap, const FlowSolverParams & params)
{
  params.validate();
  if (!coarse.same_size(reference) || vmap.width != coarse.width || vmap.height != coarse.height) {
    throw ArgumentError("estimate_tilt_flow: input dimensions differ");
  }
  for (double v : vmap.v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("estimate_tilt_flow: variance map outside [0, 1]");
  }
  Grid moving = to_grid(turbsim::gaussian_blur(coarse.luminance(), params.presmooth));
  Grid target = to_grid(turbsim::gaussian_blur(reference.luminance(), params.presmooth));
  double scale = 0.0;
  for (double t : target.d) scale += t;
  scale /= static_cast<double>(target.d.size());
  if (scale > 0.0) {
    for (double & m : moving.d) m /= scale;
    for (double & t : target.d) t /= scale;
  }
  Grid weight(vmap.width, vmap.height);
  for (std::size_t i = 0; i < weight.d.size(); ++i) weight.d[i] = 1.0 / (1.0 + params.kappa * vmap.v[i]);

  // pyramid, index 0 = full resolution
  std::vector<Grid> pm{moving};
  std::vector<Grid> pt{target};
  std::vector<Grid> pw{weight};
  const int top = params.finest_level + params.levels - 1;
  while (static_cast<int>(pm.size()) <= top) {
    const Grid & last = pt.back();
    if ((last.w + 1) / 2 < params.min_level_size || (last.h + 1) / 2 < params.min_level_size) break;
    pm.push_back(downsample(pm.back()));
    pt.push_back(downsample(pt.back()));
    pw.push_back(downsample(pw.back()));
  }
  const int coarsest = static_cast<int>(pm.size()) - 1;
  const int finest = std::min(params.finest_level, coarsest);

  FlowResult result;
  Grid u(pt[coarsest].w, pt[coarsest].h);
  Grid v(pt[coarsest].w, pt[coarsest].h);
  for (int level = coarsest; level >= finest; --level) {
    if (u.w != pt[level].w || u.h != pt[level].h) {
      u = upsample_flow(u, pt[level].w, pt[level].h, true);
      v = upsample_flow(v, pt[level].w, pt[level].h, false);
    }
    result.levels.push_back(solve_level(pm[level], pt[level], pw[level], u, v, params, level));
  }
  for (int level = finest - 1; level >= 0; --level) {
    u = upsample_flow(u, pt[level].w, pt[level].h, true);
    v = upsample_flow(v, pt[level].w, pt[level].h, false);
  }
  result.flow = TiltFlow(coarse.width, coarse.height);
  result.flow.u = std::move(u.d);
  result.flow.v = std::move(v.d);
  return result;
}

TiltFlow estimate_tilt_flow(
  const Image & coarse, const Image & reference, const VarianceMap & vmap, const FlowSolverParams & params)
{
  return estimate_tilt_flow_traced(coarse, reference, vmap, params).flow;
}

Image warp_refine(const Image & coarse, const TiltFlow & flow) { return turbsim::apply_tilt(coarse, flow); }

RestorationReport restore_pipeline(const Image & turbulent, const EventStream & events, const RestoreConfig & cfg)
{
  cfg.validate();
  turbulent.validate();
  events.validate();
  RestorationReport report;
  auto stage = [&](const char * name, auto && fn) {
    const auto t0 = Clock::now();
    try {
      fn();
    } catch (const NumericError & e) {
      throw NumericError(std::string(name) + ": " + e.what());
    } catch (const ValidationError & e) {
      throw ValidationError(std::string(name) + ": " + e.what());
    } catch (const ArgumentError & e) {
      throw ArgumentError(std::string(name) + ": " + e.what());
    }
    report.timings_ms[name] = ms_since(t0);
  };
  stage("deblur", [&] { report.coarse = deblur(turbulent, events, cfg); });
  stage("variance", [&] {
    report.variance = formation::variance_map(events, Contrast::uniform(cfg.c), cfg.accum_mode);
  });
  stage("reference", [&] { report.reference = reference_frame(turbulent, events, cfg); });
  stage("flow", [&] {
    FlowResult fr = estimate_tilt_flow_traced(report.coarse, report.reference, report.variance, cfg.flow);
    report.flow = std::move(fr.flow);
    report.levels = std::move(fr.levels);
  });
  stage("warp", [&] { report.refined = warp_refine(report.coarse, report.flow); });
  for (double v : report.refined.data) {
    if (!std::isfinite(v)) throw NumericError("restore_pipeline: non-finite output sample");
  }
  return report;
}

}  // namespace tevkit::restore
