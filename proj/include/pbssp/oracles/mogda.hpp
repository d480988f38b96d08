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
#include <vector>

#include "pbssp/core/problem.hpp"
#include "pbssp/robust/robust.hpp"

namespace pbssp::oracles {

// Stage schedule of the multistage optimistic gradient method. The a-priori
// bound a on E|z - z*|^2 evolves per stage of N steps at stepsize eta as
//
//   a <- c_bias * exp(-eta mu N / 2) * a + c_var * eta sigma^2 / mu,
//
// with calibrated constants c_bias, c_var. Stage 0 runs at eta0 until the
// bias term is below target/2; stage s >= 1 halves the stepsize and doubles
// the length, which divides the bias by four per stage.
struct MogdaOptions {
  double eta0 = 0.0;  // 0 selects 1 / (4 L)
  double c_bias = 2.0;
  double c_var = 5.0;
  std::size_t max_stages = 60;
};

struct MogdaSchedule {
  std::vector<double> steps;
  std::vector<std::size_t> lengths;
  double predicted_sq_dist = 0.0;
  std::size_t total_steps() const {
    std::size_t s = 0;
    for (auto n : lengths) s += n;
    return s;
  }
};

inline MogdaSchedule mogda_schedule(double mu, double L, double sigma2, double initial_sq_dist, double target,
                                    const MogdaOptions& opt = {}) {
  if (!(mu > 0.0) || !(L >= mu)) throw DomainError("MOGDA schedule needs 0 < mu <= L");
  if (!(target > 0.0)) throw DomainError("MOGDA target must be positive");
  MogdaSchedule s;
  const double eta0 = opt.eta0 > 0.0 ? std::min(opt.eta0, 1.0 / (4.0 * L)) : 1.0 / (4.0 * L);
  double a = std::max(initial_sq_dist, 0.0);
  const double ratio = std::max(1.0, 2.0 * opt.c_bias * a / target);
  const auto n0 = std::max<std::size_t>(1, detail::ceil_to_size(2.0 / (eta0 * mu) * std::log(ratio)));
  s.steps.push_back(eta0);
  s.lengths.push_back(n0);
  a = opt.c_bias * std::exp(-eta0 * mu * static_cast<double>(n0) / 2.0) * a + opt.c_var * eta0 * sigma2 / mu;
  const auto unit = detail::ceil_to_size(2.0 * std::log(4.0 * opt.c_bias) / (eta0 * mu));
  for (std::size_t st = 1; a > target; ++st) {
    if (st > opt.max_stages) throw DiagnosticError("MOGDA schedule exceeded the stage limit");
    const double eta = eta0 * std::ldexp(1.0, -static_cast<int>(st));
    const std::size_t len = unit << st;
    s.steps.push_back(eta);
    s.lengths.push_back(len);
    a = opt.c_bias * std::exp(-eta * mu * static_cast<double>(len) / 2.0) * a + opt.c_var * eta * sigma2 / mu;
  }
  s.predicted_sq_dist = a;
  return s;
}

inline MogdaSchedule mogda_schedule_for(const SspProblem& problem, double initial_sq_dist, double target,
                                        const MogdaOptions& opt = {}) {
  const auto& c = problem.constants();
  const double mu = c.mu();
  const double L = std::max(detail::require(c.L_x, "L_x"), detail::require(c.L_y, "L_y")) +
                   detail::require(c.L_xy, "L_xy");
  const double sx = detail::require(c.sigma_x, "sigma_x"), sy = detail::require(c.sigma_y, "sigma_y");
  return mogda_schedule(mu, L, sx * sx + sy * sy, initial_sq_dist, target, opt);
}

// Multistage stochastic optimistic gradient descent-ascent from z0, one
// sample per step:  z_{k+1} = z_k - eta (2 F_k - F_{k-1}).
inline OracleCall mogda_solve(const SspProblem& problem, double target_sq_dist, const PrimalDualPair& z0,
                              double initial_sq_dist, Rng& rng, const MogdaOptions& opt = {}) {
  if (problem.domain_x().kind() != Domain::Kind::Free || problem.domain_y().kind() != Domain::Kind::Free)
    throw CapabilityError("MOGDA needs an unconstrained problem");
  const MogdaSchedule sched = mogda_schedule_for(problem, initial_sq_dist, target_sq_dist, opt);
  Vec x = z0.x, y = z0.y;
  problem.domain_x().check_size(x);
  problem.domain_y().check_size(y);
  std::size_t used = 0;
  for (std::size_t s = 0; s < sched.steps.size(); ++s) {
    const double eta = sched.steps[s];
    PrimalDualPair prev = problem.sample_gradient(x, y, 1, rng);
    ++used;
    for (std::size_t k = 0; k < sched.lengths[s]; ++k) {
      PrimalDualPair g = k == 0 ? prev : problem.sample_gradient(x, y, 1, rng);
      if (k > 0) ++used;
      x -= eta * (2.0 * g.x - prev.x);
      y += eta * (2.0 * g.y - prev.y);
      prev = std::move(g);
    }
  }
  OracleCall out;
  out.z = PrimalDualPair(std::move(x), std::move(y));
  out.cost.oracle_calls = 1;
  out.cost.samples = used;
  return out;
}

}  // namespace pbssp::oracles
