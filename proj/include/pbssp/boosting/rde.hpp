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

#include <vector>

#include "pbssp/boosting/plan.hpp"
#include "pbssp/oracles/saa.hpp"

namespace pbssp::boosting {

struct RdeResult {
  PrimalDualPair z;
  Accounting cost;
  std::size_t m = 0;
  double delta = 0.0;  // per-call accuracy (theory mode)
  std::size_t n = 0;   // SAA size per call (theory mode)
};

// Per-call accuracy of the unconstrained baseline: eps / (54 (kappa^2 + kappa)).
inline double rde_delta(const ProblemConstants& c, double epsilon) {
  const double k = c.kappa();
  return epsilon / (54.0 * (k * k + k));
}

// SAA size for which E|x - x*|^2 <= 2 delta / mu (a weak-gap oracle at
// accuracy delta), from E|x - x*|^2 <= 32 C Lxy^2 / (n mu_x^2 mu_y^2).
inline std::size_t rde_saa_size(const ProblemConstants& c, double delta) {
  const double C = detail::require(c.C, "C"), Lxy = detail::require(c.L_xy, "L_xy");
  const double mx = detail::require(c.mu_x, "mu_x"), my = detail::require(c.mu_y, "mu_y");
  return std::max<std::size_t>(1, detail::ceil_to_size(16.0 * C * Lxy * Lxy * std::min(mx, my) /
                                                       (mx * mx * my * my * delta)));
}

// m oracle calls; separate Euclidean extracts for x and y.
inline RdeResult rde_distance(const SspProblem& problem, const CandidateOracle& oracle, std::size_t m, Rng& rng) {
  oracles::RobustResult r = oracles::robust_oracle(oracle, problem, m, rng);
  RdeResult out;
  out.z = std::move(r.z);
  out.cost = r.cost;
  out.m = m;
  return out;
}

// m shared oracle calls, then a function-gap selection for each block.
inline RdeResult rde_function_gap(const SspProblem& problem, const CandidateOracle& oracle, std::size_t m,
                                  const robust::GradientBatch& batch_x, const robust::GradientBatch& batch_y,
                                  Rng& rng) {
  if (m % 2 == 0) throw DomainError("function-gap baseline needs odd m");
  const std::uint64_t base = rng();
  std::vector<PrimalDualPair> cands;
  RdeResult out;
  out.m = m;
  for (std::size_t j = 0; j < m; ++j) {
    Rng r = make_stream(base, j);
    OracleCall c = oracle(problem, r);
    out.cost += c.cost;
    cands.push_back(std::move(c.z));
  }
  Rng gx = make_stream(base, m), gy = make_stream(base, m + 1);
  robust::FunctionGapResult fx = robust::function_gap_select_from(cands, problem, batch_x, Block::X, gx);
  robust::FunctionGapResult fy = robust::function_gap_select_from(cands, problem, batch_y, Block::Y, gy);
  out.cost += fx.cost;
  out.cost += fy.cost;
  out.z = PrimalDualPair(std::move(fx.point), std::move(fy.point));
  return out;
}

// Theory-mode baseline with the SAA oracle. Unconstrained: m = ceil(18 ln(1/p))
// calls at accuracy eps / (54 (kappa^2 + kappa)). Constrained: m = ceil(18 ln(4/p))
// (odd) calls at accuracy delta / 3 with delta = eps / (M_x + M_y), where the
// multipliers are evaluated without perturbation.
inline RdeResult rde_baseline(const SspProblem& problem, double epsilon, double p, Mode mode, Rng& rng,
                              const oracles::SaaOptions& opt = {}) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  const ProblemConstants& c = problem.constants();
  if (mode == Mode::Unconstrained) {
    const double delta = rde_delta(c, epsilon);
    const std::size_t n = rde_saa_size(c, delta);
    RdeResult r = rde_distance(problem, oracles::saa_oracle(n, opt), trials_rde(p), rng);
    r.delta = delta;
    r.n = n;
    return r;
  }
  const double Mx = multiplier_x(c, 0.0), My = multiplier_y(c, 0.0);
  const double delta = epsilon / (Mx + My);
  const std::size_t n = weak_gap_saa_size(c, 0.0, 0.0, delta / 3.0);
  const auto bx = robust::GradientBatch::accuracy(robust::function_gap_delta_G(problem, delta, Block::X));
  const auto by = robust::GradientBatch::accuracy(robust::function_gap_delta_G(problem, delta, Block::Y));
  RdeResult r = rde_function_gap(problem, oracles::saa_oracle(n, opt), trials_rde_c(p), bx, by, rng);
  r.delta = delta;
  r.n = n;
  return r;
}

}  // namespace pbssp::boosting
