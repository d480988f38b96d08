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

#include <functional>
#include <vector>

#include "pbssp/boosting/driver.hpp"
#include "pbssp/oracles/mogda.hpp"
#include "pbssp/oracles/saa.hpp"
#include "pbssp/robust/extract.hpp"

namespace pbssp::boosting {

// Builds the candidate oracle for a round (sizes may depend on the round).
using OracleFactory = std::function<CandidateOracle(const RoundContext&)>;
using BatchRule = std::function<robust::GradientBatch(const RoundContext&)>;

// Distance round: m candidates, Euclidean extract on each block.
inline RoundOracle robust_distance_round(OracleFactory make) {
  return [make = std::move(make)](const RoundContext& ctx, Rng& rng) {
    oracles::RobustResult r = oracles::robust_oracle(make(ctx), ctx.problem(), ctx.plan->m, rng);
    return OracleCall{std::move(r.z), r.cost};
  };
}

// Function-gap round on the stream's block; the other block of the returned
// pair is the domain center and carries no information.
inline RoundOracle function_gap_round(OracleFactory make, BatchRule batch) {
  return [make = std::move(make), batch = std::move(batch)](const RoundContext& ctx, Rng& rng) {
    robust::FunctionGapResult fg =
        robust::function_gap_select(make(ctx), ctx.problem(), batch(ctx), ctx.plan->m, ctx.block, rng);
    const SspProblem& p = ctx.problem();
    PrimalDualPair z = ctx.block == Block::X ? PrimalDualPair(fg.point, p.domain_y().center())
                                             : PrimalDualPair(p.domain_x().center(), fg.point);
    return OracleCall{std::move(z), fg.cost};
  };
}

inline const RoundSizes& sizes_at(const PbsspPlan& plan, int round) {
  if (plan.sample_sizes.size() != static_cast<std::size_t>(plan.T + 2))
    throw CapabilityError("plan carries no sample sizes (missing problem constants)");
  return plan.sample_sizes[static_cast<std::size_t>(round)];
}

inline std::size_t planned_n(const RoundContext& ctx) {
  const RoundSizes& s = sizes_at(*ctx.plan, ctx.round);
  return ctx.block == Block::X ? s.n_x : s.n_y;
}

// Unconstrained SAA boosting with the plan's sample sizes.
inline PbsspResult boost_saa(const SspProblem& problem, const PbsspPlan& plan, Rng& rng,
                             const oracles::SaaOptions& opt = {}) {
  if (problem.constrained()) throw CapabilityError("boost_saa needs an unconstrained problem");
  sizes_at(plan, 0);
  auto make = [opt](const RoundContext& ctx) { return oracles::saa_oracle(planned_n(ctx), opt); };
  const RoundOracle r = robust_distance_round(make);
  return pb_ssp_generic(problem, plan, r, r, rng);
}

// Constrained SAA boosting: distance rounds, then function-gap selection at
// accuracy delta / M^T with gradient accuracy (L + lambda) sqrt(delta' / (mu + lambda)).
inline PbsspResult boost_saa_c(const SspProblem& problem, const PbsspPlan& plan, Rng& rng,
                               const oracles::SaaOptions& opt = {}) {
  if (plan.m % 2 == 0) throw DomainError("constrained boosting needs odd m");
  if (!plan.M_x || !plan.M_y) throw CapabilityError("constrained plan carries no multipliers");
  sizes_at(plan, 0);
  auto make = [opt](const RoundContext& ctx) { return oracles::saa_oracle(planned_n(ctx), opt); };
  auto batch = [](const RoundContext& ctx) {
    const double M = ctx.block == Block::X ? *ctx.plan->M_x : *ctx.plan->M_y;
    return robust::GradientBatch::accuracy(
        robust::function_gap_delta_G(ctx.problem(), ctx.plan->delta / M, ctx.block));
  };
  return pb_ssp_generic(problem, plan, robust_distance_round(make), function_gap_round(make, batch), rng);
}

// Experiment mode: a fixed oracle for every round; the last round is a
// distance round on unconstrained problems and a function-gap round with a
// fixed gradient batch on constrained ones.
inline PbsspResult boost_with_factory(const SspProblem& problem, const PbsspPlan& plan, const OracleFactory& make,
                                      std::size_t gradient_batch, Rng& rng, const DriverOptions& dopt = {}) {
  const RoundOracle r = robust_distance_round(make);
  if (plan.last_round == LastRound::Distance) return pb_ssp_generic(problem, plan, r, r, rng, dopt);
  if (plan.m % 2 == 0) throw DomainError("constrained boosting needs odd m");
  auto batch = [gradient_batch](const RoundContext&) { return robust::GradientBatch::of_size(gradient_batch); };
  return pb_ssp_generic(problem, plan, r, function_gap_round(make, batch), rng, dopt);
}

inline PbsspResult boost_with_oracle(const SspProblem& problem, const PbsspPlan& plan, const CandidateOracle& oracle,
                                     std::size_t gradient_batch, Rng& rng, const DriverOptions& dopt = {}) {
  return boost_with_factory(
      problem, plan, [oracle](const RoundContext&) { return oracle; }, gradient_batch, rng, dopt);
}

struct MogdaBoostOptions {
  double initial_sq_dist = 1.0;  // bound on |z0 - z*|^2
  oracles::MogdaOptions mogda;
};

// m MOGDA runs from one warm start, joint Euclidean extract over the pairs.
inline OracleCall robust_mogda(const SspProblem& problem, double target, const PrimalDualPair& z0,
                               double initial_sq_dist, std::size_t m, Rng& rng, const oracles::MogdaOptions& opt) {
  const std::uint64_t base = rng();
  std::vector<Vec> stacked;
  std::vector<PrimalDualPair> cands;
  Accounting cost;
  for (std::size_t j = 0; j < m; ++j) {
    Rng r = make_stream(base, j);
    OracleCall c = oracles::mogda_solve(problem, target, z0, initial_sq_dist, r, opt);
    cost += c.cost;
    stacked.push_back(c.z.stacked());
    cands.push_back(std::move(c.z));
  }
  const auto [pt, k] = robust::robust_select(stacked, robust::EuclideanMetric{});
  (void)pt;
  return OracleCall{cands[k], cost};
}

// MOGDA boosting: round i targets 2 delta / (27 (mu + lambda^{i-1})), the last
// round 2 delta / (27 (L_f + lambda^T)); warm starts are threaded forward and
// their distance bounded from the previous round's accuracy.
inline PbsspResult boost_mogda(const SspProblem& problem, const PbsspPlan& plan, const PrimalDualPair& z0, Rng& rng,
                               const MogdaBoostOptions& opt = {}) {
  if (problem.constrained()) throw CapabilityError("boost_mogda needs an unconstrained problem");
  const ProblemConstants& c = problem.constants();
  auto oracle = [&c, opt](const RoundContext& ctx, Rng& rng2) {
    const PbsspPlan& pl = *ctx.plan;
    const bool bx = ctx.block == Block::X;
    const double mu = bx ? pl.mu_x : pl.mu_y;
    const double target = ctx.final_round()
                              ? 2.0 * pl.delta / (27.0 * ((bx ? c.L_f() : c.L_g()) + ctx.lambda))
                              : 2.0 * pl.delta / (27.0 * (mu + ctx.lambda));
    const double init =
        ctx.round == 0 ? opt.initial_sq_dist : warm_start_sq_dist(c, pl, ctx.round - 1, ctx.block);
    return robust_mogda(ctx.problem(), target, *ctx.warm_start, init, pl.m, rng2, opt.mogda);
  };
  DriverOptions d;
  d.z0 = z0;
  return pb_ssp_generic(problem, plan, oracle, oracle, rng, d);
}

}  // namespace pbssp::boosting
