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
#include <initializer_list>
#include <optional>
#include <vector>

#include "pbssp/core/types.hpp"
#include "pbssp/robust/robust.hpp"

namespace pbssp::boosting {

enum class Mode { Unconstrained, Constrained };
enum class LastRound { Distance, FunctionGap };

struct PlanOverrides {
  std::optional<double> nu;
  std::optional<int> T;
  std::optional<std::size_t> m;
};

struct RoundSizes {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
};

struct PbsspPlan {
  double epsilon = 0.0;
  double p = 0.0;
  double nu = 2.0;
  int T = 0;
  double delta = 0.0;
  std::size_t m = 1;
  Mode mode = Mode::Unconstrained;
  LastRound last_round = LastRound::Distance;
  double mu_x = 0.0;
  double mu_y = 0.0;
  std::vector<double> lambda_x;  // entry i + 1 holds lambda^i, i = -1..T
  std::vector<double> lambda_y;
  std::vector<double> radius_x;  // entry i holds eps^i, i = 0..T
  std::vector<double> radius_y;
  std::optional<double> M_x, M_y;
  std::vector<RoundSizes> sample_sizes;  // rounds 0..T+1; empty when the constants are missing

  double lam_x(int i) const { return lambda_x.at(static_cast<std::size_t>(i + 1)); }
  double lam_y(int i) const { return lambda_y.at(static_cast<std::size_t>(i + 1)); }
  int rounds() const { return T + 2; }

  // 2 + sum_{i=0}^T lambda_x^i / (mu_x + lambda_x^{i-1}) + lambda_y^i / (mu_y + lambda_y^{i-1}).
  double budget_factor() const {
    double s = 2.0;
    for (int i = 0; i <= T; ++i) s += lam_x(i) / (mu_x + lam_x(i - 1)) + lam_y(i) / (mu_y + lam_y(i - 1));
    return s;
  }
  double budget() const { return delta * budget_factor(); }

  void validate() const {
    if (T < 0) throw InvariantError("plan has a negative round count");
    const auto n = static_cast<std::size_t>(T + 2);
    if (lambda_x.size() != n || lambda_y.size() != n) throw InvariantError("plan lambda schedule has the wrong length");
    if (lambda_x[0] != 0.0 || lambda_y[0] != 0.0) throw InvariantError("plan must start from lambda^{-1} = 0");
    for (std::size_t i = 2; i < n; ++i)
      if (!(lambda_x[i] > lambda_x[i - 1]) || !(lambda_y[i] > lambda_y[i - 1]))
        throw InvariantError("plan lambda schedule must increase strictly");
    if (budget() > epsilon * (1.0 + 1e-12)) throw InvariantError("plan exceeds its accuracy budget");
    if (mode == Mode::Constrained && m % 2 == 0) throw InvariantError("constrained plan needs odd m");
  }
};

// Smallest T >= 0 with nu^T >= r.
inline int ceil_log(double r, double nu) {
  if (!(nu > 1.0)) throw DomainError("base number nu must exceed 1");
  int T = 0;
  double v = 1.0;
  while (v < r * (1.0 - 1e-12)) {
    v *= nu;
    ++T;
    if (T > 10000) throw DomainError("condition number too large for a finite schedule");
  }
  return T;
}

inline int rounds_for(const ProblemConstants& c, Mode mode, double nu) {
  const double mx = detail::require(c.mu_x, "mu_x"), my = detail::require(c.mu_y, "mu_y");
  const double Lx = detail::require(c.L_x, "L_x"), Ly = detail::require(c.L_y, "L_y");
  const double Lxy = detail::require(c.L_xy, "L_xy");
  double r = 0.0;
  if (mode == Mode::Unconstrained)
    r = std::max((Lxy * Lxy / my + Lx) / mx, (Lxy * Lxy / mx + Ly) / my);
  else
    r = std::max({Lx / mx, Ly / my, Lxy * Lxy / (mx * my)});
  return ceil_log(r, nu);
}

inline std::size_t trials_boost_saa(int T, double p) {
  return std::max<std::size_t>(1, detail::ceil_to_size(18.0 * std::log((2.0 * T + 4.0) / p)));
}
inline std::size_t make_odd(std::size_t m) { return m % 2 == 0 ? m + 1 : m; }
inline std::size_t trials_boost_saa_c(int T, double p) {
  return make_odd(detail::ceil_to_size(18.0 * std::log((2.0 * T + 6.0) / p)));
}
inline std::size_t trials_rde(double p) {
  return std::max<std::size_t>(1, detail::ceil_to_size(18.0 * std::log(1.0 / p)));
}
inline std::size_t trials_rde_c(double p) { return make_odd(detail::ceil_to_size(18.0 * std::log(4.0 / p))); }

// Function-gap multipliers of the last round for perturbation amplitudes lx, ly.
inline double multiplier_x(const ProblemConstants& c, double lx) {
  return robust::function_gap_multiplier(detail::require(c.L_x, "L_x") + lx, detail::require(c.mu_x, "mu_x") + lx,
                                         detail::require(c.mu_y, "mu_y"), detail::require(c.L_xy, "L_xy"));
}
inline double multiplier_y(const ProblemConstants& c, double ly) {
  return robust::function_gap_multiplier(detail::require(c.L_y, "L_y") + ly, detail::require(c.mu_y, "mu_y") + ly,
                                         detail::require(c.mu_x, "mu_x"), detail::require(c.L_xy, "L_xy"));
}
inline double multiplier_bound() { return 138.0 + 36.0 * std::sqrt(2.0); }

// Unconstrained SAA sizes: 432 C Lxy^2 / ((mu_x + lambda) mu_y^2 delta) per
// round, the last one inflated by the condition number of f^T (y alike).
inline std::vector<RoundSizes> boost_saa_sizes(const ProblemConstants& c, const PbsspPlan& plan) {
  const double C = detail::require(c.C, "C"), Lxy = detail::require(c.L_xy, "L_xy");
  const double mx = plan.mu_x, my = plan.mu_y, d = plan.delta;
  std::vector<RoundSizes> out;
  for (int i = 0; i <= plan.T; ++i) {
    RoundSizes r;
    r.n_x = detail::ceil_to_size(432.0 * C * Lxy * Lxy / ((mx + plan.lam_x(i - 1)) * my * my * d));
    r.n_y = detail::ceil_to_size(432.0 * C * Lxy * Lxy / (mx * mx * (my + plan.lam_y(i - 1)) * d));
    out.push_back(r);
  }
  const double lx = plan.lam_x(plan.T), ly = plan.lam_y(plan.T);
  const double kx = (c.L_f() + lx) / (mx + lx), ky = (c.L_g() + ly) / (my + ly);
  RoundSizes last;
  last.n_x = detail::ceil_to_size(kx * 432.0 * C * Lxy * Lxy / ((mx + lx) * my * my * d));
  last.n_y = detail::ceil_to_size(ky * 432.0 * C * Lxy * Lxy / (mx * mx * (my + ly) * d));
  out.push_back(last);
  return out;
}

// Weak-gap SAA budget on a perturbed constrained problem at accuracy delta:
// ceil(2/delta (ell_x^2 / (mu_x + lx) + ell_y^2 / (mu_y + ly))).
inline std::size_t weak_gap_saa_size(const ProblemConstants& c, double lx, double ly, double delta) {
  const double ex = detail::require(c.ell_x, "ell_x"), ey = detail::require(c.ell_y, "ell_y");
  const double mx = detail::require(c.mu_x, "mu_x"), my = detail::require(c.mu_y, "mu_y");
  return detail::ceil_to_size(2.0 / delta * (ex * ex / (mx + lx) + ey * ey / (my + ly)));
}

// Constrained SAA sizes: distance rounds at accuracy delta / 27, the last
// round's oracle at accuracy delta / (3 M^T).
inline std::vector<RoundSizes> boost_saa_c_sizes(const ProblemConstants& c, const PbsspPlan& plan) {
  std::vector<RoundSizes> out;
  for (int i = 0; i <= plan.T; ++i)
    out.push_back({weak_gap_saa_size(c, plan.lam_x(i - 1), 0.0, plan.delta / 27.0),
                   weak_gap_saa_size(c, 0.0, plan.lam_y(i - 1), plan.delta / 27.0)});
  const double lx = plan.lam_x(plan.T), ly = plan.lam_y(plan.T);
  out.push_back({weak_gap_saa_size(c, lx, 0.0, plan.delta / (3.0 * multiplier_x(c, lx))),
                 weak_gap_saa_size(c, 0.0, ly, plan.delta / (3.0 * multiplier_y(c, ly)))});
  return out;
}

inline bool has_all(std::initializer_list<const std::optional<double>*> v) {
  for (auto* o : v)
    if (!o->has_value()) return false;
  return true;
}

// Geometric schedule lambda^i = mu nu^i. With nu = 2 the per-round accuracy is
// delta = eps / (4 + 4T); other bases use the exact accuracy budget so that
// the plan never exceeds eps.
inline PbsspPlan plan_geometric(const ProblemConstants& c, double epsilon, double p, Mode mode, double nu = 2.0,
                                const PlanOverrides& ov = {}) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
  PbsspPlan plan;
  plan.epsilon = epsilon;
  plan.p = p;
  plan.mode = mode;
  plan.last_round = mode == Mode::Unconstrained ? LastRound::Distance : LastRound::FunctionGap;
  plan.nu = ov.nu.value_or(nu);
  if (!(plan.nu > 1.0)) throw DomainError("base number nu must exceed 1");
  plan.mu_x = detail::require(c.mu_x, "mu_x");
  plan.mu_y = detail::require(c.mu_y, "mu_y");
  if (!(plan.mu_x > 0.0) || !(plan.mu_y > 0.0))
    throw CapabilityError("planning needs mu_x, mu_y > 0; regularize a convex-concave problem first");
  if (ov.T && *ov.T < 0) throw DomainError("T must be nonnegative");
  plan.T = ov.T ? *ov.T : rounds_for(c, mode, plan.nu);

  plan.lambda_x.push_back(0.0);
  plan.lambda_y.push_back(0.0);
  for (int i = 0; i <= plan.T; ++i) {
    plan.lambda_x.push_back(plan.mu_x * std::pow(plan.nu, i));
    plan.lambda_y.push_back(plan.mu_y * std::pow(plan.nu, i));
  }
  plan.delta = epsilon / (4.0 + 4.0 * plan.T);
  plan.delta = std::min(plan.delta, epsilon / plan.budget_factor());
  for (int i = 0; i <= plan.T; ++i) {
    plan.radius_x.push_back(std::sqrt(2.0 * plan.delta / (plan.mu_x + plan.lam_x(i - 1))));
    plan.radius_y.push_back(std::sqrt(2.0 * plan.delta / (plan.mu_y + plan.lam_y(i - 1))));
  }

  if (ov.m) {
    if (*ov.m == 0) throw DomainError("m must be positive");
    plan.m = mode == Mode::Constrained ? make_odd(*ov.m) : *ov.m;
  } else {
    plan.m = mode == Mode::Unconstrained ? trials_boost_saa(plan.T, p) : trials_boost_saa_c(plan.T, p);
  }

  const bool smooth = has_all({&c.L_x, &c.L_y, &c.L_xy});
  if (mode == Mode::Constrained && smooth) {
    plan.M_x = multiplier_x(c, plan.lam_x(plan.T));
    plan.M_y = multiplier_y(c, plan.lam_y(plan.T));
  }
  if (mode == Mode::Unconstrained && smooth && has_all({&c.C}))
    plan.sample_sizes = boost_saa_sizes(c, plan);
  if (mode == Mode::Constrained && smooth && has_all({&c.ell_x, &c.ell_y}))
    plan.sample_sizes = boost_saa_c_sizes(c, plan);

  // Theory schedules bring the last-round condition numbers down to 2.
  if (plan.nu == 2.0 && !ov.T && smooth && mode == Mode::Unconstrained) {
    const double lx = plan.lam_x(plan.T), ly = plan.lam_y(plan.T);
    if ((c.L_f() + lx) / (plan.mu_x + lx) > 2.0 * (1.0 + 1e-12) ||
        (c.L_g() + ly) / (plan.mu_y + ly) > 2.0 * (1.0 + 1e-12))
      throw InvariantError("last-round condition number exceeds 2");
  }
  plan.validate();
  return plan;
}

// Experiment schedule: (nu, T, m) set by the user, lambda^i = mu nu^i.
inline PbsspPlan plan_experiment(const ProblemConstants& c, double epsilon, double p, Mode mode, double nu, int T,
                                 std::size_t m) {
  PlanOverrides ov;
  ov.nu = nu;
  ov.T = T;
  ov.m = m;
  return plan_geometric(c, epsilon, p, mode, nu, ov);
}

// Samples drawn by the SAA rounds of a plan: m * sum of per-round sizes.
inline std::size_t planned_saa_samples(const PbsspPlan& plan) {
  std::size_t s = 0;
  for (const RoundSizes& r : plan.sample_sizes) s += r.n_x + r.n_y;
  return s * plan.m;
}

// Upper bound on the squared distance from the warm start of round j + 1
// (the output of round j) to the saddle of Phi_x^j, given round-j accuracy:
//   dx^2 <= 2 delta / (mu_x + l^j) * ((L_f + l^{j-1}) / (mu_x + l^{j-1}) + sum_{t<j} l^t / (mu_x + l^{t-1})),
//   dy   <= (1 + k) sqrt(2 delta / (mu_x + l^{j-1})) + k dx,  k = L_xy / mu_y.
inline double warm_start_sq_dist(const ProblemConstants& c, const PbsspPlan& plan, int j, Block which) {
  const bool bx = which == Block::X;
  const double mu = bx ? plan.mu_x : plan.mu_y;
  const double mu_o = bx ? plan.mu_y : plan.mu_x;
  const double Lf = bx ? c.L_f() : c.L_g();
  auto lam = [&](int i) { return bx ? plan.lam_x(i) : plan.lam_y(i); };
  double s = (Lf + lam(j - 1)) / (mu + lam(j - 1));
  for (int t = 0; t < j; ++t) s += lam(t) / (mu + lam(t - 1));
  const double dx2 = 2.0 * plan.delta / (mu + lam(j)) * s;
  const double k = detail::require(c.L_xy, "L_xy") / mu_o;
  const double dy = (1.0 + k) * std::sqrt(2.0 * plan.delta / (mu + lam(j - 1))) + k * std::sqrt(dx2);
  return dx2 + dy * dy;
}

}  // namespace pbssp::boosting
