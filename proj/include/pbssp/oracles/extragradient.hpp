// Copyright 2026 The pbssp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "pbssp/core/objective.hpp"

namespace pbssp::oracles {

struct ExtragradientOptions {
  double tol = 1e-9;               // gradient-mapping norm at exit
  std::size_t max_iters = 2'000'000;
  double step_factor = 0.5;        // step = step_factor / L
  std::optional<PrimalDualPair> start;
};

struct SolveResult {
  PrimalDualPair z;
  std::size_t iterations = 0;
  double residual = 0.0;
  double step = 0.0;
};

// Proximal extragradient on a deterministic objective. Block terms are handled
// inside the proximal steps (Euclidean or KL, per block geometry), the smooth
// bilinear-quadratic part through its gradient.
inline SolveResult extragradient_solve(const Objective& obj, const ExtragradientOptions& opt = {}) {
  const double L = obj.smooth_lipschitz();
  const double eta = opt.step_factor / std::max(L, 1e-12);
  Vec x = opt.start ? opt.start->x : obj.domain_x().center();
  Vec y = opt.start ? opt.start->y : obj.domain_y().center();
  obj.domain_x().check_size(x);
  obj.domain_y().check_size(y);
  if (obj.geometry_x() == Geometry::Euclidean) x = obj.domain_x().project(x);
  if (obj.geometry_y() == Geometry::Euclidean) y = obj.domain_y().project(y);

  SolveResult out;
  out.step = eta;
  double res = kInf;
  for (std::size_t k = 0; k < opt.max_iters; ++k) {
    const Vec xh = obj.prox_x(x, obj.smooth_grad_x(x, y), eta);
    const Vec yh = obj.prox_y(y, obj.smooth_grad_y(x, y), eta);
    res = std::sqrt((x - xh).squaredNorm() + (y - yh).squaredNorm()) / eta;
    if (!std::isfinite(res)) break;
    if (res <= opt.tol) {
      out.z = PrimalDualPair(std::move(x), std::move(y));
      out.iterations = k;
      out.residual = res;
      return out;
    }
    const Vec gx = obj.smooth_grad_x(xh, yh);
    const Vec gy = obj.smooth_grad_y(xh, yh);
    x = obj.prox_x(x, gx, eta);
    y = obj.prox_y(y, gy, eta);
  }
  throw DiagnosticError("extragradient did not reach tolerance (residual " + std::to_string(res) + ")",
                        PrimalDualPair(x, y));
}

// Gradient-mapping norm at z, the stationarity measure used for termination.
inline double gradient_mapping_norm(const Objective& obj, const PrimalDualPair& z, double step) {
  const Vec xh = obj.prox_x(z.x, obj.smooth_grad_x(z.x, z.y), step);
  const Vec yh = obj.prox_y(z.y, obj.smooth_grad_y(z.x, z.y), step);
  return std::sqrt((z.x - xh).squaredNorm() + (z.y - yh).squaredNorm()) / step;
}

}  // namespace pbssp::oracles
