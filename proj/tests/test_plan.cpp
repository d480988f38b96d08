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

#include "pbssp/pbssp.hpp"

namespace pbssp::boosting {
namespace {

ProblemConstants constants(double mu, double L, double Lxy, double C = 1.0, double ell = 1.0) {
  ProblemConstants c;
  c.mu_x = c.mu_y = mu;
  c.L_x = c.L_y = L;
  c.L_xy = Lxy;
  c.C = C;
  c.ell_x = c.ell_y = ell;
  c.sigma_x = c.sigma_y = 1.0;
  return c;
}

// Hand-evaluated reference for the round count: smallest T with nu^T >= r.
int reference_T(double r, double nu) {
  int T = 0;
  while (std::pow(nu, T) < r - 1e-9) ++T;
  return T;
}

TEST(Plan, RoundsAndAccuracyForConditionEight) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0);
  const PbsspPlan plan = plan_geometric(c, 1.6, 0.01, Mode::Unconstrained);
  EXPECT_EQ(plan.T, 3);
  EXPECT_DOUBLE_EQ(plan.delta, 1.6 / 16.0);
  EXPECT_EQ(plan.m, 125u);
  EXPECT_DOUBLE_EQ(plan.lam_x(-1), 0.0);
  EXPECT_DOUBLE_EQ(plan.lam_x(0), 1.0);
  EXPECT_DOUBLE_EQ(plan.lam_x(3), 8.0);
}

TEST(Plan, TrialCounts) {
  EXPECT_EQ(trials_boost_saa(3, 0.01), 125u);  // ceil(18 ln 1000)
  EXPECT_EQ(trials_rde(0.01), 83u);            // ceil(18 ln 100)
  EXPECT_EQ(trials_boost_saa_c(3, 0.01) % 2, 1u);
  EXPECT_EQ(trials_rde_c(0.01) % 2, 1u);
  EXPECT_EQ(trials_rde_c(0.01), make_odd(static_cast<std::size_t>(std::ceil(18.0 * std::log(400.0)))));
  EXPECT_EQ(make_odd(4), 5u);
  EXPECT_EQ(make_odd(5), 5u);
}

TEST(Plan, FirstRoundSaaSize) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0, 1.0);
  PbsspPlan plan = plan_geometric(c, 1.6, 0.01, Mode::Unconstrained);
  plan.delta = 0.1;
  const auto sizes = boost_saa_sizes(c, plan);
  EXPECT_EQ(sizes[0].n_x, 17280u);  // 432 * 4 / 0.1
  EXPECT_EQ(sizes[0].n_y, 17280u);
  // Round i uses mu + lambda^{i-1}: lambda^0 = 1 halves the size.
  EXPECT_EQ(sizes[1].n_x, 8640u);
  ASSERT_EQ(sizes.size(), 5u);
  const double kx = (c.L_f() + plan.lam_x(3)) / (1.0 + plan.lam_x(3));
  EXPECT_EQ(sizes[4].n_x, static_cast<std::size_t>(std::ceil(kx * 432.0 * 4.0 / ((1.0 + 8.0) * 0.1) - 1e-9)));
}

TEST(Plan, ConstrainedRoundSaaSize) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0, 1.0, 1.0);
  EXPECT_EQ(weak_gap_saa_size(c, 0.0, 0.0, 0.1 / 27.0), 1080u);  // 54 (1 + 1) / 0.1
  PbsspPlan plan = plan_geometric(c, 1.0, 0.01, Mode::Constrained);
  plan.delta = 0.1;
  EXPECT_EQ(boost_saa_c_sizes(c, plan)[0].n_x, 1080u);
}

TEST(Plan, RdeAccuracyAndSize) {
  const ProblemConstants c = constants(1.0, 1.0, 1.0);
  EXPECT_NEAR(rde_delta(c, 0.108), 0.001, 1e-15);
  // 16 C Lxy^2 min(mu) / (mu_x^2 mu_y^2 delta).
  EXPECT_EQ(rde_saa_size(c, 0.001), 16000u);
}

TEST(Plan, RequiresStrongConvexity) {
  ProblemConstants c = constants(1.0, 4.0, 2.0);
  c.mu_x = 0.0;
  EXPECT_THROW(plan_geometric(c, 1.0, 0.01, Mode::Unconstrained), CapabilityError);
  EXPECT_THROW(plan_geometric(constants(1.0, 4.0, 2.0), 1.0, 1.5, Mode::Unconstrained), DomainError);
}

TEST(Plan, MissingConstantFailsLoudly) {
  ProblemConstants c = constants(1.0, 4.0, 2.0);
  c.C.reset();
  const PbsspPlan plan = plan_geometric(c, 1.0, 0.01, Mode::Unconstrained);
  EXPECT_TRUE(plan.sample_sizes.empty());
  EXPECT_THROW(sizes_at(plan, 0), CapabilityError);
}

TEST(PlanProperty, BudgetNeverExceedsTarget) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(0.05, 5.0), un(1.2, 6.0), ue(1e-3, 10.0);
  for (int t = 0; t < 500; ++t) {
    ProblemConstants c;
    c.mu_x = u(rng);
    c.mu_y = u(rng);
    c.L_x = *c.mu_x * (1.0 + u(rng));
    c.L_y = *c.mu_y * (1.0 + u(rng));
    c.L_xy = u(rng);
    const double eps = ue(rng), nu = t % 2 ? 2.0 : un(rng);
    for (Mode mode : {Mode::Unconstrained, Mode::Constrained}) {
      const PbsspPlan plan = plan_geometric(c, eps, 0.05, mode, nu);
      EXPECT_LE(plan.budget(), eps * (1.0 + 1e-12));
      double ref = 2.0;
      for (int i = 0; i <= plan.T; ++i)
        ref += plan.lam_x(i) / (*c.mu_x + plan.lam_x(i - 1)) + plan.lam_y(i) / (*c.mu_y + plan.lam_y(i - 1));
      EXPECT_NEAR(plan.budget_factor(), ref, 1e-9 * ref);
    }
  }
}

TEST(PlanProperty, RoundCountMatchesReference) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int t = 0; t < 500; ++t) {
    ProblemConstants c;
    c.mu_x = u(rng);
    c.mu_y = u(rng);
    c.L_x = *c.mu_x * (1.0 + u(rng));
    c.L_y = *c.mu_y * (1.0 + u(rng));
    c.L_xy = u(rng);
    const double mx = *c.mu_x, my = *c.mu_y, Lxy = *c.L_xy;
    const double ru = std::max((Lxy * Lxy / my + *c.L_x) / mx, (Lxy * Lxy / mx + *c.L_y) / my);
    const double rc = std::max({*c.L_x / mx, *c.L_y / my, Lxy * Lxy / (mx * my)});
    EXPECT_EQ(rounds_for(c, Mode::Unconstrained, 2.0), reference_T(ru, 2.0));
    EXPECT_EQ(rounds_for(c, Mode::Constrained, 3.0), reference_T(rc, 3.0));
  }
}

TEST(PlanProperty, LastRoundConditionNumberCollapses) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int t = 0; t < 500; ++t) {
    ProblemConstants c;
    c.mu_x = u(rng);
    c.mu_y = u(rng);
    c.L_x = *c.mu_x * (1.0 + u(rng));
    c.L_y = *c.mu_y * (1.0 + u(rng));
    c.L_xy = u(rng);
    const PbsspPlan plan = plan_geometric(c, 1.0, 0.05, Mode::Unconstrained);
    EXPECT_LE((c.L_f() + plan.lam_x(plan.T)) / (*c.mu_x + plan.lam_x(plan.T)), 2.0 + 1e-12);
    EXPECT_LE((c.L_g() + plan.lam_y(plan.T)) / (*c.mu_y + plan.lam_y(plan.T)), 2.0 + 1e-12);
  }
}

TEST(PlanProperty, ConstrainedMultipliersBelowUniversalBound) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int t = 0; t < 500; ++t) {
    ProblemConstants c = constants(u(rng), 1.0, u(rng));
    c.L_x = c.L_y = *c.mu_x * (1.0 + u(rng));
    c.mu_y = c.mu_x;
    const PbsspPlan plan = plan_geometric(c, 1.0, 0.05, Mode::Constrained);
    ASSERT_TRUE(plan.M_x && plan.M_y);
    EXPECT_LE(*plan.M_x, multiplier_bound() + 1e-9);
    EXPECT_LE(*plan.M_y, multiplier_bound() + 1e-9);
    EXPECT_EQ(plan.m % 2, 1u);
  }
}

TEST(Plan, ExperimentOverridesAndOddTrials) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0);
  const PbsspPlan u = plan_experiment(c, 0.1, 0.01, Mode::Unconstrained, 4.0, 7, 4);
  EXPECT_EQ(u.T, 7);
  EXPECT_EQ(u.m, 4u);
  EXPECT_DOUBLE_EQ(u.lam_x(2), 16.0);
  const PbsspPlan k = plan_experiment(c, 0.1, 0.01, Mode::Constrained, 4.0, 7, 4);
  EXPECT_EQ(k.m, 5u);
  EXPECT_EQ(k.last_round, LastRound::FunctionGap);
}

TEST(Plan, SampleAccountingIdentity) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0, 0.01);
  const PbsspPlan plan = plan_geometric(c, 1.0, 0.1, Mode::Unconstrained);
  std::size_t ref = 0;
  for (const RoundSizes& r : plan.sample_sizes) ref += plan.m * (r.n_x + r.n_y);
  EXPECT_EQ(planned_saa_samples(plan), ref);
}

TEST(Plan, WarmStartBoundIsFiniteAndGrowsWithAccuracy) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0);
  const PbsspPlan plan = plan_geometric(c, 1.0, 0.1, Mode::Unconstrained);
  PbsspPlan looser = plan;
  looser.delta *= 4.0;
  for (int j = 0; j <= plan.T; ++j) {
    const double a = warm_start_sq_dist(c, plan, j, Block::X);
    EXPECT_GT(a, 0.0);
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_NEAR(warm_start_sq_dist(c, looser, j, Block::X), 4.0 * a, 1e-9 * a);
  }
}

TEST(Plan, InvalidPlansRejected) {
  const ProblemConstants c = constants(1.0, 4.0, 2.0);
  PbsspPlan plan = plan_geometric(c, 1.0, 0.1, Mode::Unconstrained);
  plan.delta *= 10.0;
  EXPECT_THROW(plan.validate(), InvariantError);
  PbsspPlan odd = plan_geometric(c, 1.0, 0.1, Mode::Constrained);
  odd.m = 4;
  EXPECT_THROW(odd.validate(), InvariantError);
}

}  // namespace
}  // namespace pbssp::boosting
