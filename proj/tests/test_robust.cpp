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

#include <algorithm>
#include <cmath>

#include "pbssp/pbssp.hpp"

namespace pbssp::robust {
namespace {

// Reference extraction: for each point scan r over its sorted distances and
// stop at the first radius whose ball holds more than m/2 points.
template <class Point, class Metric>
ExtractResult brute_extract(const std::vector<Point>& pts, const Metric& rho) {
  const std::size_t m = pts.size();
  ExtractResult r;
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> d;
    for (std::size_t t = 0; t < m; ++t) d.push_back(rho(pts[j], pts[t]));
    std::vector<double> cand = d;
    std::sort(cand.begin(), cand.end());
    for (double rad : cand) {
      std::size_t inside = 0;
      for (double v : d) inside += v <= rad ? 1 : 0;
      if (2 * inside > m) {
        r.radii.push_back(rad);
        break;
      }
    }
  }
  std::vector<double> s = r.radii;
  std::sort(s.begin(), s.end());
  r.median_radius = s[(m + 1) / 2 - 1];
  for (std::size_t k = 0; k < m; ++k)
    if (r.radii[k] <= r.median_radius) r.indices.push_back(k);
  return r;
}

std::vector<Vec> random_points(std::size_t m, Eigen::Index d, Rng& rng) {
  std::vector<Vec> pts(m);
  std::uniform_int_distribution<int> coarse(-3, 3);
  for (auto& p : pts) {
    p.resize(d);
    // Coarse grid so that ties occur.
    for (Eigen::Index i = 0; i < d; ++i) p[i] = coarse(rng);
  }
  return pts;
}

TEST(Extract, ThreePointsOnTheLine) {
  const std::vector<double> pts{0.0, 0.1, 10.0};
  const ExtractResult r = extract(pts, EuclideanMetric{});
  ASSERT_EQ(r.radii.size(), 3u);
  EXPECT_NEAR(r.radii[0], 0.1, 1e-15);
  EXPECT_NEAR(r.radii[1], 0.1, 1e-15);
  EXPECT_NEAR(r.radii[2], 9.9, 1e-15);
  EXPECT_NEAR(r.median_radius, 0.1, 1e-15);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1}));
  const auto [p, k] = robust_select(pts, EuclideanMetric{});
  EXPECT_EQ(p, 0.0);
  EXPECT_EQ(k, 0u);
}

TEST(Extract, IdenticalPoints) {
  const std::vector<double> pts(7, 1.5);
  const ExtractResult r = extract(pts, EuclideanMetric{});
  for (double v : r.radii) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(r.indices.size(), 7u);
  EXPECT_EQ(robust_select(pts, EuclideanMetric{}).second, 0u);
}

TEST(Extract, SinglePoint) {
  const ExtractResult r = extract(std::vector<double>{4.0}, EuclideanMetric{});
  EXPECT_EQ(r.radii, std::vector<double>{0.0});
  EXPECT_EQ(r.indices, std::vector<std::size_t>{0});
}

TEST(Extract, EmptyInputRejected) { EXPECT_THROW(extract(std::vector<double>{}, EuclideanMetric{}), DomainError); }

TEST(ExtractProperty, MatchesBruteForceForBothMetrics) {
  Rng rng(1);
  std::uniform_int_distribution<int> mdist(1, 25);
  for (int t = 0; t < 500; ++t) {
    const std::size_t m = static_cast<std::size_t>(mdist(rng));
    const auto pts = random_points(m, 3, rng);
    InnerProductMetric ip{Vec::Random(3)};
    for (int which = 0; which < 2; ++which) {
      const ExtractResult a = which ? extract(pts, ip) : extract(pts, EuclideanMetric{});
      const ExtractResult b = which ? brute_extract(pts, ip) : brute_extract(pts, EuclideanMetric{});
      EXPECT_EQ(a.radii, b.radii);
      EXPECT_EQ(a.median_radius, b.median_radius);
      EXPECT_EQ(a.indices, b.indices);
    }
  }
}

TEST(ExtractProperty, MajorityAndDeterminism) {
  Rng rng(2);
  for (std::size_t m = 1; m <= 51; ++m) {
    std::vector<Vec> pts(m);
    for (auto& p : pts) p = Vec::NullaryExpr(2, [&] { return standard_normal(rng); });
    const ExtractResult a = extract(pts, EuclideanMetric{});
    const ExtractResult b = extract(pts, EuclideanMetric{});
    EXPECT_GE(a.indices.size(), (m + 1) / 2);
    EXPECT_EQ(a.indices, b.indices);
    EXPECT_EQ(a.radii, b.radii);
  }
}

TEST(ExtractProperty, InnerProductPseudometricAxioms) {
  Rng rng(3);
  InnerProductMetric rho{Vec::NullaryExpr(4, [&] { return standard_normal(rng); })};
  for (int t = 0; t < 200; ++t) {
    const Vec a = Vec::NullaryExpr(4, [&] { return standard_normal(rng); });
    const Vec b = Vec::NullaryExpr(4, [&] { return standard_normal(rng); });
    const Vec c = Vec::NullaryExpr(4, [&] { return standard_normal(rng); });
    EXPECT_EQ(rho(a, a), 0.0);
    EXPECT_GE(rho(a, b), 0.0);
    EXPECT_EQ(rho(a, b), rho(b, a));
    EXPECT_LE(rho(a, b), rho(a, c) + rho(c, b) + 1e-12);
  }
}

// 45 points, each within delta of the target with probability 2/3 + margin.
TEST(RobustSelect, ConfidenceBoostingFrequency) {
  Rng rng(4);
  const double delta = 1.0;
  const std::size_t m = 45;
  int good = 0;
  const int trials = 1000;
  std::bernoulli_distribution near(0.7);
  std::uniform_real_distribution<double> in(-delta, delta), far(5.0, 50.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<double> pts(m);
    for (auto& p : pts) p = near(rng) ? in(rng) : far(rng);
    const auto [p, k] = robust_select(pts, EuclideanMetric{});
    (void)k;
    good += std::abs(p) <= 3 * delta ? 1 : 0;
  }
  EXPECT_GE(good, static_cast<int>(0.9 * trials));
}

SspProblem benchmark(double sigma = 1.0) { return problems::make_quadratic(20, 20, 1.0, 8.0, 2.0, sigma, false, 3); }

TEST(RobustGradient, BatchSizeFromAccuracy) {
  EXPECT_EQ(gradient_batch_size(1.0, 0.1), 300u);
  EXPECT_THROW(gradient_batch_size(1.0, 0.0), DomainError);
}

TEST(RobustGradient, NoiselessReturnsExactGradient) {
  const SspProblem p = benchmark(0.0);
  Rng rng(5);
  const PrimalDualPair z(Vec::Ones(20), Vec::Zero(20));
  const RobustGradientResult r = robust_gradient(p, z, GradientBatch::of_size(3), 5, Block::X, rng);
  EXPECT_LE((r.gradient - p.grad_x(z.x, z.y)).norm(), 1e-12);
  EXPECT_EQ(r.cost.gradient_calls, 5u);
  EXPECT_EQ(r.cost.samples, 15u);
}

TEST(RobustGradient, FailureFrequencyUnderGaussianNoise) {
  const SspProblem p = benchmark(1.0);
  Rng rng(6);
  const PrimalDualPair z(Vec::Ones(20), Vec::Ones(20));
  const Vec exact = p.grad_x(z.x, z.y);
  const double dG = 0.5;
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const RobustGradientResult r = robust_gradient(p, z, GradientBatch::accuracy(dG), 45, Block::X, rng);
    bad += (r.gradient - exact).norm() > 3 * dG ? 1 : 0;
  }
  EXPECT_LE(bad, 90);
}

TEST(FunctionGap, ExactOracleReturnsTheSaddle) {
  problems::QuadraticSpec s;
  s.d_x = s.d_y = 4;
  s.L = 3.0;
  s.sigma = 0.0;
  s.box_radius = 0.5;
  const SspProblem p = problems::make_quadratic_instance(s).problem;
  const CandidateOracle exact = [](const SspProblem& q, Rng&) { return OracleCall{*q.saddle(), {1, 0, 0}}; };
  Rng rng(7);
  const FunctionGapResult r = function_gap_select(exact, p, GradientBatch::of_size(1), 5, Block::X, rng);
  EXPECT_LE((r.point - p.saddle()->x).norm(), 1e-15);
  EXPECT_NEAR(p.inner_max(r.point) - *p.saddle_value(), 0.0, 1e-9);
  EXPECT_EQ(r.cost.oracle_calls, 5u);
  EXPECT_EQ(r.cost.gradient_calls, 5u);
}

TEST(FunctionGap, EvenTrialCountRejected) {
  const SspProblem p = benchmark();
  const CandidateOracle exact = [](const SspProblem& q, Rng&) { return OracleCall{*q.saddle(), {}}; };
  Rng rng(8);
  EXPECT_THROW(function_gap_select(exact, p, GradientBatch::of_size(1), 4, Block::X, rng), DomainError);
}

TEST(FunctionGap, MultiplierBoundUnderScheduleConditions) {
  // lambda >= L_x and L_xy^2 <= (mu_x + lambda) mu_y give at most 138 + 36 sqrt2.
  Rng rng(9);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int t = 0; t < 1000; ++t) {
    const double mu = u(rng), L = mu + u(rng), lam = L * (1.0 + u(rng)), muy = u(rng);
    const double Lxy = std::sqrt((mu + lam) * muy) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    EXPECT_LE(function_gap_multiplier(L + lam, mu + lam, muy, Lxy), 138.0 + 36.0 * std::sqrt(2.0) + 1e-9);
  }
  // The bound is attained in the limit.
  EXPECT_NEAR(function_gap_multiplier(2.0, 1.0, 1.0, 1.0), 138.0 + 36.0 * std::sqrt(2.0), 1e-12);
}

}  // namespace
}  // namespace pbssp::robust
