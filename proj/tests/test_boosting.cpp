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

#include <gtest/gtest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "pbssp/pbssp.hpp"

namespace pbssp::boosting {
namespace {

SspProblem small(double sigma, std::uint64_t seed = 3) {
  return problems::make_quadratic(5, 5, 1.0, 8.0, 2.0, sigma, false, seed);
}

SspProblem boxed(double sigma, double r = 0.3) {
  problems::QuadraticSpec s;
  s.d_x = s.d_y = 4;
  s.L = 6.0;
  s.sigma = sigma;
  s.box_radius = r;
  s.seed = 11;
  return problems::make_quadratic_instance(s).problem;
}

// Returns the saddle of whatever (perturbed) problem it is handed.
const CandidateOracle kExact = [](const SspProblem& q, Rng&) {
  if (q.saddle()) return OracleCall{*q.saddle(), {1, 0, 0}};
  oracles::ExtragradientOptions eg;
  eg.tol = 1e-12;
  return OracleCall{oracles::extragradient_solve(q.mean(), eg).z, {1, 0, 0}};
};

TEST(Boosting, ExactOracleReproducesTheSaddle) {
  const SspProblem p = small(0.0);
  const PbsspPlan plan = plan_experiment(p.constants(), 0.1, 0.1, Mode::Unconstrained, 2.0, 4, 3);
  Rng rng(1);
  const PbsspResult r = boost_with_oracle(p, plan, kExact, 1, rng);
  EXPECT_LE((r.z.stacked() - p.saddle()->stacked()).norm(), 1e-9);
  EXPECT_EQ(r.telemetry.size(), 2u * (plan.T + 2));
  EXPECT_EQ(r.cost.oracle_calls, 2u * (plan.T + 2) * plan.m);
  for (const RoundTelemetry& t : r.telemetry) EXPECT_LE(*t.achieved, 1e-9);
}

TEST(Boosting, ZeroRoundsStillRunsTheFinalRound) {
  const SspProblem p = small(1.0);
  const PbsspPlan plan = plan_experiment(p.constants(), 1.0, 0.1, Mode::Unconstrained, 2.0, 0, 3);
  Rng rng(2);
  const PbsspResult r = boost_with_oracle(p, plan, oracles::saa_oracle(50), 1, rng);
  ASSERT_EQ(r.telemetry.size(), 4u);
  EXPECT_DOUBLE_EQ(r.at(0, Block::X).lambda, 0.0);
  EXPECT_DOUBLE_EQ(r.at(1, Block::X).lambda, 1.0);
  EXPECT_DOUBLE_EQ(r.at(1, Block::Y).radius, 0.0);
  EXPECT_EQ(r.cost.samples, 4u * 3u * 50u);
}

TEST(Boosting, ConstrainedExactOracleReproducesTheSaddle) {
  const SspProblem p = boxed(0.0);
  const PbsspPlan plan = plan_experiment(p.constants(), 0.1, 0.1, Mode::Constrained, 2.0, 3, 3);
  Rng rng(3);
  const PbsspResult r = boost_with_oracle(p, plan, kExact, 4, rng);
  EXPECT_LE((r.z.stacked() - p.saddle()->stacked()).norm(), 1e-8);
  EXPECT_LE(eval_gap(p, r.z).gap, 1e-10);
  // Function-gap round: m oracle calls and m gradient calls per stream.
  EXPECT_EQ(r.at(plan.T + 1, Block::X).cost.gradient_calls, plan.m);
}

TEST(Boosting, ProximalLedgerHolds) {
  const SspProblem p = small(1.0);
  const PbsspPlan plan = plan_experiment(p.constants(), 0.5, 0.1, Mode::Unconstrained, 2.0, 3, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const PbsspResult r = boost_with_oracle(p, plan, oracles::saa_oracle(20), 1, rng);
    for (Block b : {Block::X, Block::Y}) {
      const ProximalLedger l = proximal_ledger(p, plan, r, b);
      EXPECT_GE(l.slack(), -1e-8) << "seed " << seed;
      EXPECT_GE(l.lhs, -1e-10);
    }
  }
}

TEST(Boosting, DeterministicGivenTheSeed) {
  const SspProblem p = small(1.0);
  const PbsspPlan plan = plan_geometric(p.constants(), 5.0, 0.3, Mode::Unconstrained);
  Rng a(9), b(9);
  const PbsspResult ra = boost_saa(p, plan, a);
  const PbsspResult rb = boost_saa(p, plan, b);
  EXPECT_EQ(ra.z.stacked(), rb.z.stacked());
  EXPECT_EQ(ra.cost.samples, rb.cost.samples);
}

TEST(Boosting, SampleAccountingMatchesThePlan) {
  const SspProblem p = small(1.0);
  const PbsspPlan plan = plan_geometric(p.constants(), 5.0, 0.3, Mode::Unconstrained);
  Rng rng(4);
  const PbsspResult r = boost_saa(p, plan, rng);
  EXPECT_EQ(r.cost.samples, planned_saa_samples(plan));
  EXPECT_EQ(r.cost.gradient_calls, 0u);
  EXPECT_EQ(r.cost.oracle_calls, 2u * static_cast<std::size_t>(plan.T + 2) * plan.m);
}

TEST(Boosting, ConstrainedAccountingAddsGradientSamples) {
  const SspProblem p = boxed(0.5);
  const PbsspPlan plan = plan_geometric(p.constants(), 5.0, 0.3, Mode::Constrained);
  Rng rng(5);
  const PbsspResult r = boost_saa_c(p, plan, rng);
  EXPECT_EQ(r.cost.gradient_calls, 2u * plan.m);
  EXPECT_GT(r.cost.samples, planned_saa_samples(plan));
  EXPECT_TRUE(p.domain_x().contains(r.z.x));
  EXPECT_TRUE(p.domain_y().contains(r.z.y));
}

// Oracle that misses the saddle by exactly 0.99 of the round radius on both
// blocks; the warm start of the next round must stay inside the bound.
TEST(Boosting, WarmStartDistanceWithinBound) {
  const SspProblem p = small(0.0);
  const ProblemConstants& c = p.constants();
  const PbsspPlan plan = plan_geometric(c, 0.5, 0.1, Mode::Unconstrained);
  Rng dir(6);
  const RoundOracle off = [&](const RoundContext& ctx, Rng&) {
    PrimalDualPair z = *ctx.problem().saddle();
    if (!ctx.final_round()) {
      Vec ux = Vec::NullaryExpr(z.x.size(), [&] { return standard_normal(dir); });
      Vec uy = Vec::NullaryExpr(z.y.size(), [&] { return standard_normal(dir); });
      z.x += 0.99 * ctx.radius * ux.normalized();
      z.y += 0.99 * ctx.radius * uy.normalized();
    }
    return OracleCall{z, {1, 0, 0}};
  };
  Rng rng(7);
  const PbsspResult r = pb_ssp_generic(p, plan, off, off, rng);
  for (int j = 0; j < plan.T; ++j) {
    for (Block b : {Block::X, Block::Y}) {
      const bool bx = b == Block::X;
      const RoundTelemetry& t = r.at(j, b);
      const double lam = bx ? plan.lam_x(j) : plan.lam_y(j);
      const PerturbedProblem next =
          bx ? perturb(p, lam, t.center, 0.0, std::nullopt) : perturb(p, 0.0, std::nullopt, lam, t.center);
      const double d2 = (t.pair.stacked() - next.problem.saddle()->stacked()).squaredNorm();
      EXPECT_LE(d2, warm_start_sq_dist(c, plan, j, b)) << "round " << j;
    }
  }
}

TEST(Boosting, FewerPlannedSamplesThanTheBaselineAtLargeCondition) {
  ProblemConstants c;
  c.mu_x = c.mu_y = 1.0;
  c.L_x = c.L_y = 100.0;
  c.L_xy = 10.0;
  c.C = 1.0;
  const double eps = 0.01, p = 0.01;
  const PbsspPlan plan = plan_geometric(c, eps, p, Mode::Unconstrained);
  const double boost = static_cast<double>(planned_saa_samples(plan));
  const double rde = static_cast<double>(trials_rde(p)) * static_cast<double>(rde_saa_size(c, rde_delta(c, eps)));
  EXPECT_LT(boost * 10.0, rde);
}

TEST(Boosting, MogdaBoostingReachesTheTarget) {
  const SspProblem p = small(0.1);
  const double eps = 0.5;
  PlanOverrides ov;
  ov.m = 5;
  const PbsspPlan plan = plan_geometric(p.constants(), eps, 0.2, Mode::Unconstrained, 2.0, ov);
  const PrimalDualPair z0(Vec::Zero(5), Vec::Zero(5));
  MogdaBoostOptions opt;
  opt.initial_sq_dist = 2.0 * (z0.stacked() - p.saddle()->stacked()).squaredNorm();
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const PbsspResult r = boost_mogda(p, plan, z0, rng, opt);
    ok += eval_gap(p, r.z).gap <= eps ? 1 : 0;
    EXPECT_EQ(r.cost.oracle_calls, 2u * static_cast<std::size_t>(plan.T + 2) * plan.m);
  }
  EXPECT_EQ(ok, 5);
}

TEST(Boosting, FactoryReceivesThePreviousRoundOutput) {
  const SspProblem p = small(0.0);
  const PbsspPlan plan = plan_experiment(p.constants(), 0.1, 0.1, Mode::Unconstrained, 2.0, 2, 3);
  std::vector<std::pair<int, bool>> seen;
  const OracleFactory make = [&](const RoundContext& ctx) {
    seen.emplace_back(ctx.round, ctx.warm_start.has_value());
    if (ctx.warm_start) {
      const PrimalDualPair& w = *ctx.warm_start;
      EXPECT_LE((w.stacked() - p.saddle()->stacked()).norm(), 1e-8) << "round " << ctx.round;
    }
    return kExact;
  };
  Rng rng(8);
  const PbsspResult r = boost_with_factory(p, plan, make, 1, rng);
  EXPECT_LE((r.z.stacked() - p.saddle()->stacked()).norm(), 1e-9);
  ASSERT_EQ(seen.size(), 2u * (plan.T + 2));
  for (const auto& [round, warm] : seen) EXPECT_EQ(warm, round > 0) << "round " << round;
}

TEST(Boosting, WarmStartedSpegBeatsColdStartedSpeg) {
  const SspProblem g = problems::make_matrix_game(6, 8, 0.5, 2, problems::Regularization::Entropy, 0.1);
  const PbsspPlan plan = plan_experiment(g.constants(), 0.01, 0.1, Mode::Constrained, 4.0, 2, 3);
  oracles::SpegOptions opt;
  opt.iters = 60;
  opt.batch = 10;
  opt.eta = 1.0;
  const OracleFactory cold = [opt](const RoundContext&) { return oracles::speg_oracle(opt); };
  const OracleFactory warm = [opt](const RoundContext& ctx) { return oracles::speg_oracle(opt, ctx.warm_start); };
  double gc = 0.0, gw = 0.0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Rng a(seed), b(seed);
    gc += eval_gap(g, boost_with_factory(g, plan, cold, 100, a).z).gap;
    gw += eval_gap(g, boost_with_factory(g, plan, warm, 100, b).z).gap;
  }
  EXPECT_LT(gw, gc);
}

TEST(Boosting, RejectsMismatchedProblems) {
  const SspProblem p = boxed(0.5);
  const PbsspPlan plan = plan_geometric(small(1.0).constants(), 1.0, 0.1, Mode::Unconstrained);
  Rng rng(1);
  EXPECT_THROW(boost_saa(p, plan, rng), CapabilityError);
  EXPECT_THROW(boost_mogda(p, plan, PrimalDualPair(Vec::Zero(4), Vec::Zero(4)), rng), CapabilityError);
}

}  // namespace
}  // namespace pbssp::boosting
