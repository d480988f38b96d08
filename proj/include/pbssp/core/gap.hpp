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

#include <optional>

#include "pbssp/core/problem.hpp"

namespace pbssp {

struct GapReport {
  double gap = 0.0;                  // f(x) - g(y)
  std::optional<double> weak_gap;    // Phi(x, y*) - Phi(x*, y)
  std::optional<double> primal_gap;  // f(x) - f(x*)
  std::optional<double> dual_gap;    // g(y*) - g(y)
};

inline void check_feasible(const SspProblem& problem, const PrimalDualPair& z) {
  if (!problem.domain_x().contains(z.x, 1e-9) || !problem.domain_y().contains(z.y, 1e-9))
    throw DomainError("point is not feasible for the problem");
}

inline double eval_weak_gap(const SspProblem& problem, const PrimalDualPair& z) {
  const auto& s = problem.saddle();
  if (!s) throw CapabilityError("weak gap needs a known saddle point");
  check_feasible(problem, z);
  return problem.value(z.x, s->y) - problem.value(s->x, z.y);
}

inline GapReport eval_gap(const SspProblem& problem, const PrimalDualPair& z) {
  check_feasible(problem, z);
  GapReport r;
  const double f = problem.inner_max(z.x);
  const double g = problem.inner_min(z.y);
  r.gap = f - g;
  if (const auto& s = problem.saddle()) {
    r.weak_gap = problem.value(z.x, s->y) - problem.value(s->x, z.y);
    const double v = problem.value(s->x, s->y);
    r.primal_gap = f - v;
    r.dual_gap = v - g;
  }
  return r;
}

}  // namespace pbssp
