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

// Boosts a plain SAA solver on a small stochastic quadratic saddle point
// problem and compares the duality gaps.

#include <cstdio>

#include "pbssp/pbssp.hpp"

using namespace pbssp;

int main() {
  const SspProblem problem = problems::make_quadratic(/*d_x=*/5, /*d_y=*/5, /*mu=*/1.0, /*L=*/4.0, /*L_xy=*/1.0,
                                                      /*sigma=*/1.0, /*heavy_tailed=*/false, /*seed=*/7);
  const double eps = 0.05, p = 0.05;

  const boosting::PbsspPlan plan = boosting::plan_geometric(problem.constants(), eps, p, boosting::Mode::Unconstrained);
  std::printf("plan: T = %d, m = %zu, delta = %.3g, SAA samples = %zu\n", plan.T, plan.m, plan.delta,
              boosting::planned_saa_samples(plan));

  Rng rng(2026);
  const boosting::PbsspResult boosted = boosting::boost_saa(problem, plan, rng);
  const GapReport g = eval_gap(problem, boosted.z);
  std::printf("PB-SSP: gap = %.3e  (%zu oracle calls, %zu samples)\n", g.gap, boosted.cost.oracle_calls,
              boosted.cost.samples);

  // One SAA call with the same total sample budget, for comparison.
  const OracleCall plain = oracles::saa_solve(problem, boosted.cost.samples, rng);
  std::printf("SAA:    gap = %.3e  (1 oracle call, %zu samples)\n", eval_gap(problem, plain.z).gap,
              plain.cost.samples);
  return 0;
}
