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

#include "pbssp/core/problem.hpp"
#include "pbssp/robust/robust.hpp"

namespace pbssp::oracles {

struct SpegOptions {
  std::size_t iters = 500;
  std::size_t batch = 10;
  std::optional<double> eta;  // stepsize; default 1 / (2 max|K_ij| sqrt(iters))
};

inline double speg_default_eta(const Objective& mean, std::size_t iters) {
  const double a = mean.K.cwiseAbs().maxCoeff();
  return 1.0 / (2.0 * std::max(a, 1e-12) * std::sqrt(static_cast<double>(std::max<std::size_t>(iters, 1))));
}

// Stochastic proximal extragradient with KL steps on both simplices:
//   x~ = argmin <K1 y, x> + hx(x) + KL(x | x_prev) / eta   (and y~ alike),
//   x  = argmin <K2 y~, x> + hx(x) + KL(x | x_prev) / eta,
// with independent mini-batches K1, K2. Returns the average of the iterates.
inline OracleCall speg_solve(const SspProblem& problem, const SpegOptions& opt, Rng& rng,
                             const std::optional<PrimalDualPair>& start = std::nullopt) {
  if (problem.domain_x().kind() != Domain::Kind::Simplex || problem.domain_y().kind() != Domain::Kind::Simplex)
    throw CapabilityError("SPEG needs simplex domains for both players");
  if (problem.mean().has_Qx() || problem.mean().has_Qy()) throw CapabilityError("SPEG needs a bilinear coupling");
  if (opt.iters == 0 || opt.batch == 0) throw DomainError("SPEG needs iters >= 1 and batch >= 1");
  const double eta = opt.eta.value_or(speg_default_eta(problem.mean(), opt.iters));
  if (!(eta > 0.0)) throw DomainError("SPEG stepsize must be positive");

  const Domain& dx = problem.domain_x();
  const Domain& dy = problem.domain_y();
  const BlockTerms& hx = problem.mean().hx;
  const BlockTerms& hy = problem.mean().hy;
  Vec x = start ? start->x : dx.center();
  Vec y = start ? start->y : dy.center();
  Vec sx = Vec::Zero(x.size()), sy = Vec::Zero(y.size());

  Objective o1 = problem.mean();
  Objective o2 = problem.mean();
  for (std::size_t t = 0; t < opt.iters; ++t) {
    problem.noise().draw_mean(opt.batch, rng, o1);
    const Vec xt = prox_step(dx, hx, Geometry::Entropic, x, o1.smooth_grad_x(x, y), eta);
    const Vec yt = prox_step(dy, hy, Geometry::Entropic, y, -o1.smooth_grad_y(x, y), eta);
    problem.noise().draw_mean(opt.batch, rng, o2);
    const Vec gx = o2.smooth_grad_x(xt, yt);
    const Vec gy = o2.smooth_grad_y(xt, yt);
    x = prox_step(dx, hx, Geometry::Entropic, x, gx, eta);
    y = prox_step(dy, hy, Geometry::Entropic, y, -gy, eta);
    sx += x;
    sy += y;
  }
  const double inv = 1.0 / static_cast<double>(opt.iters);
  OracleCall out;
  out.z = PrimalDualPair(sx * inv, sy * inv);
  out.cost.oracle_calls = 1;
  out.cost.samples = 2 * opt.iters * opt.batch;
  return out;
}

inline CandidateOracle speg_oracle(SpegOptions opt, std::optional<PrimalDualPair> start = std::nullopt) {
  return [opt, start = std::move(start)](const SspProblem& problem, Rng& rng) {
    return speg_solve(problem, opt, rng, start);
  };
}

}  // namespace pbssp::oracles
