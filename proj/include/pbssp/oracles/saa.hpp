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
#include <vector>

#include "pbssp/core/problem.hpp"
#include "pbssp/oracles/extragradient.hpp"
#include "pbssp/robust/robust.hpp"

namespace pbssp::oracles {

// The empirical objective (1/n) sum Phi_xi_i, plus any proximal terms already
// attached to the problem.
using EmpiricalProblem = Objective;

struct SaaOptions {
  double inner_tol = 1e-9;
  std::size_t inner_max_iters = 2'000'000;
};

// Draws n samples and returns the saddle point of the empirical objective.
inline OracleCall saa_solve(const SspProblem& problem, std::size_t n, Rng& rng, const SaaOptions& opt = {}) {
  if (n == 0) throw DomainError("SAA needs n >= 1");
  const EmpiricalProblem emp = problem.empirical(n, rng);
  ExtragradientOptions eg;
  eg.tol = opt.inner_tol;
  eg.max_iters = opt.inner_max_iters;
  SolveResult s = extragradient_solve(emp, eg);
  OracleCall out;
  out.z = std::move(s.z);
  out.cost.oracle_calls = 1;
  out.cost.samples = n;
  return out;
}

// SAA on Phi + lambda_x/2 |x - cx|^2 - lambda_y/2 |y - cy|^2.
inline OracleCall saa_solve(const SspProblem& problem, std::size_t n, double lambda_x, std::optional<Vec> center_x,
                            double lambda_y, std::optional<Vec> center_y, Rng& rng, const SaaOptions& opt = {}) {
  const PerturbedProblem p = perturb(problem, lambda_x, std::move(center_x), lambda_y, std::move(center_y));
  return saa_solve(p.problem, n, rng, opt);
}

inline CandidateOracle saa_oracle(std::size_t n, SaaOptions opt = {}) {
  return [n, opt](const SspProblem& problem, Rng& rng) { return saa_solve(problem, n, rng, opt); };
}

struct RobustResult {
  PrimalDualPair z;
  std::size_t index_x = 0;
  std::size_t index_y = 0;
  std::vector<PrimalDualPair> candidates;
  Accounting cost;
};

// m independent oracle calls; x and y picked by separate Euclidean extracts.
inline RobustResult robust_oracle(const CandidateOracle& oracle, const SspProblem& problem, std::size_t m, Rng& rng) {
  if (m == 0) throw DomainError("robust oracle needs m >= 1");
  const std::uint64_t base = rng();
  RobustResult out;
  out.candidates.reserve(m);
  std::vector<Vec> xs, ys;
  xs.reserve(m);
  ys.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    Rng r = make_stream(base, j);
    OracleCall c = oracle(problem, r);
    out.cost += c.cost;
    xs.push_back(c.z.x);
    ys.push_back(c.z.y);
    out.candidates.push_back(std::move(c.z));
  }
  auto [x, kx] = robust::robust_select(xs, robust::EuclideanMetric{});
  auto [y, ky] = robust::robust_select(ys, robust::EuclideanMetric{});
  out.z = PrimalDualPair(std::move(x), std::move(y));
  out.index_x = kx;
  out.index_y = ky;
  return out;
}

inline RobustResult robust_saa(const SspProblem& problem, std::size_t n, std::size_t m, Rng& rng,
                               const SaaOptions& opt = {}) {
  return robust_oracle(saa_oracle(n, opt), problem, m, rng);
}

inline RobustResult robust_saa(const SspProblem& problem, std::size_t n, std::size_t m, double lambda_x,
                               std::optional<Vec> center_x, double lambda_y, std::optional<Vec> center_y, Rng& rng,
                               const SaaOptions& opt = {}) {
  const PerturbedProblem p = perturb(problem, lambda_x, std::move(center_x), lambda_y, std::move(center_y));
  return robust_saa(p.problem, n, m, rng, opt);
}

}  // namespace pbssp::oracles
