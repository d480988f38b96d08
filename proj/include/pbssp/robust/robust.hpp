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

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <optional>
#include <vector>

#include "pbssp/core/problem.hpp"
#include "pbssp/robust/extract.hpp"

namespace pbssp {

// One invocation of a stochastic oracle: a candidate pair and what it cost.
struct OracleCall {
  PrimalDualPair z;
  Accounting cost;
};

// Returns a candidate for the given (possibly perturbed) problem.
using CandidateOracle = std::function<OracleCall(const SspProblem&, Rng&)>;

namespace robust {

// Batch size of each mini-batch gradient: either ceil(3 sigma^2 / delta_G^2)
// or a fixed number of samples.
struct GradientBatch {
  std::optional<double> delta_G;
  std::optional<std::size_t> fixed;

  static GradientBatch accuracy(double d) { return {d, std::nullopt}; }
  static GradientBatch of_size(std::size_t n) { return {std::nullopt, n}; }
};

inline std::size_t gradient_batch_size(double sigma, double delta_G) {
  if (!(delta_G > 0.0)) throw DomainError("delta_G must be positive");
  const double n = std::ceil(3.0 * sigma * sigma / (delta_G * delta_G));
  return std::max<std::size_t>(1, detail::ceil_to_size(n));
}

inline std::size_t resolve_batch(const SspProblem& problem, const GradientBatch& b, Block which) {
  if (b.fixed) {
    if (*b.fixed == 0) throw DomainError("gradient batch must hold at least one sample");
    return *b.fixed;
  }
  if (!b.delta_G) throw DomainError("gradient batch needs delta_G or a fixed size");
  const auto& c = problem.constants();
  const double sigma = which == Block::X ? detail::require(c.sigma_x, "sigma_x") : detail::require(c.sigma_y, "sigma_y");
  return gradient_batch_size(sigma, *b.delta_G);
}

struct RobustGradientResult {
  Vec gradient;
  std::size_t batch = 0;
  std::size_t index = 0;
  Accounting cost;
};

// Median-ball selection among m mini-batch gradient means of one block.
inline RobustGradientResult robust_gradient(const SspProblem& problem, const PrimalDualPair& z,
                                            const GradientBatch& b, std::size_t m, Block which, Rng& rng) {
  if (m == 0) throw DomainError("robust gradient needs m >= 1");
  RobustGradientResult out;
  out.batch = resolve_batch(problem, b, which);
  const std::uint64_t base = rng();
  std::vector<Vec> means(m);
  for (std::size_t j = 0; j < m; ++j) {
    Rng r = make_stream(base, j);
    PrimalDualPair g = problem.sample_gradient(z.x, z.y, out.batch, r);
    means[j] = which == Block::X ? std::move(g.x) : std::move(g.y);
  }
  auto [g, k] = robust_select(means, EuclideanMetric{});
  out.gradient = std::move(g);
  out.index = k;
  out.cost.gradient_calls = m;
  out.cost.samples = m * out.batch;
  return out;
}

// Gradient accuracy used by the function-gap selection, from the constants of
// the (perturbed) problem: (L + lambda) sqrt(delta / (mu + lambda)).
inline double function_gap_delta_G(const SspProblem& problem, double delta, Block which) {
  const auto& c = problem.constants();
  const double L = which == Block::X ? detail::require(c.L_x, "L_x") : detail::require(c.L_y, "L_y");
  const double mu = which == Block::X ? detail::require(c.mu_x, "mu_x") : detail::require(c.mu_y, "mu_y");
  if (!(mu > 0.0) || !(L > 0.0)) throw CapabilityError("function-gap selection needs positive L and mu");
  return L * std::sqrt(delta / mu);
}

struct FunctionGapResult {
  Vec point;
  std::size_t index = 0;
  Vec gradient;
  std::vector<std::size_t> I1, I2, I3;
  Accounting cost;
};

// Selection step on precomputed candidates (shared by both blocks when the
// same calls serve the x and y selections).
inline FunctionGapResult function_gap_select_from(const std::vector<PrimalDualPair>& candidates,
                                                  const SspProblem& problem, const GradientBatch& batch,
                                                  Block which, Rng& rng) {
  const std::size_t m = candidates.size();
  if (m % 2 == 0) throw DomainError("function-gap selection needs an odd number of candidates");
  std::vector<Vec> xs(m), ys(m);
  for (std::size_t j = 0; j < m; ++j) {
    xs[j] = candidates[j].x;
    ys[j] = candidates[j].y;
  }
  FunctionGapResult out;
  const ExtractResult e1 = extract(xs, EuclideanMetric{});
  const ExtractResult e2 = extract(ys, EuclideanMetric{});
  out.I1 = e1.indices;
  out.I2 = e2.indices;
  const PrimalDualPair zG(xs[out.I1.front()], ys[out.I2.front()]);
  RobustGradientResult rg = robust_gradient(problem, zG, batch, m, which, rng);
  out.gradient = rg.gradient;
  out.cost = rg.cost;

  const std::vector<Vec>& pts = which == Block::X ? xs : ys;
  const ExtractResult e3 = extract(pts, InnerProductMetric{out.gradient});
  out.I3 = e3.indices;
  const std::vector<std::size_t>& Ib = which == Block::X ? out.I1 : out.I2;
  std::vector<std::size_t> both;
  std::set_intersection(Ib.begin(), Ib.end(), out.I3.begin(), out.I3.end(), std::back_inserter(both));
  if (both.empty()) throw InvariantError("function-gap selection: empty index intersection");
  out.index = both.front();
  out.point = pts[out.index];
  return out;
}

// Full selection: m oracle calls on `problem`, then the selection step.
inline FunctionGapResult function_gap_select(const CandidateOracle& oracle, const SspProblem& problem,
                                             const GradientBatch& batch, std::size_t m, Block which, Rng& rng) {
  if (m % 2 == 0) throw DomainError("function-gap selection needs odd m");
  const std::uint64_t base = rng();
  std::vector<PrimalDualPair> cands;
  cands.reserve(m);
  Accounting cost;
  for (std::size_t j = 0; j < m; ++j) {
    Rng r = make_stream(base, j);
    OracleCall c = oracle(problem, r);
    cost += c.cost;
    cands.push_back(std::move(c.z));
  }
  Rng rg = make_stream(base, m);
  FunctionGapResult out = function_gap_select_from(cands, problem, batch, which, rg);
  out.cost += cost;
  return out;
}

// Worst-case multiplier of the function-gap selection for the x block
// (swap roles for y): 3 + (18 sqrt2 + 45) Lp/mp + 36 Lxy / sqrt(mp mu_o) + 9 Lxy^2 / (mp mu_o),
// where Lp = L + lambda, mp = mu + lambda on the selected block and mu_o is the
// other block's modulus.
inline double function_gap_multiplier(double L_plus, double mu_plus, double mu_other, double L_xy) {
  return 3.0 + (18.0 * std::sqrt(2.0) + 45.0) * L_plus / mu_plus + 36.0 * L_xy / std::sqrt(mu_plus * mu_other) +
         9.0 * L_xy * L_xy / (mu_plus * mu_other);
}

}  // namespace robust
}  // namespace pbssp
