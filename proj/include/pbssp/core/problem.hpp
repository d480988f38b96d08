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
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "pbssp/core/objective.hpp"
#include "pbssp/core/rng.hpp"
#include "pbssp/core/types.hpp"

namespace pbssp {

// Randomness of Phi_xi. A realization only changes the data K, cx, cy and
// offset of the mean objective; domains, quadratic parts and block terms are
// deterministic.
class NoiseModel {
 public:
  virtual ~NoiseModel() = default;

  // Overwrite the random data of `obj` (a copy of the mean) with one draw.
  virtual void draw(Rng& rng, Objective& obj) const = 0;

  // Overwrite the random data of `obj` with the average of n draws. The
  // default loops over draw(); concrete models sample sufficient statistics.
  virtual void draw_mean(std::size_t n, Rng& rng, Objective& obj) const {
    if (n == 0) throw DomainError("empirical average needs n >= 1");
    Mat K = Mat::Zero(obj.K.rows(), obj.K.cols());
    Vec cx = Vec::Zero(obj.cx.size()), cy = Vec::Zero(obj.cy.size());
    double off = 0.0;
    Objective s = obj;
    for (std::size_t i = 0; i < n; ++i) {
      draw(rng, s);
      K += s.K;
      cx += s.cx;
      cy += s.cy;
      off += s.offset;
    }
    const double inv = 1.0 / static_cast<double>(n);
    obj.K = K * inv;
    obj.cx = cx * inv;
    obj.cy = cy * inv;
    obj.offset = off * inv;
  }

  // Mini-batch mean of the stochastic gradient at (x, y).
  virtual PrimalDualPair sample_gradient(const Objective& mean, const Vec& x, const Vec& y, std::size_t n,
                                         Rng& rng) const {
    Objective o = mean;
    draw_mean(n, rng, o);
    return {o.grad_x(x, y), o.grad_y(x, y)};
  }

  virtual bool deterministic() const { return false; }
};

class NoNoise final : public NoiseModel {
 public:
  void draw(Rng&, Objective&) const override {}
  void draw_mean(std::size_t n, Rng&, Objective&) const override {
    if (n == 0) throw DomainError("empirical average needs n >= 1");
  }
  PrimalDualPair sample_gradient(const Objective& mean, const Vec& x, const Vec& y, std::size_t,
                                 Rng&) const override {
    return {mean.grad_x(x, y), mean.grad_y(x, y)};
  }
  bool deterministic() const override { return true; }
};

enum class ProxKind { Quadratic, KL };
enum class RegKind { Quadratic, Entropy };

// A stochastic saddle problem: exact mean objective, a noise model, known
// constants and optionally a known saddle point.
class SspProblem {
 public:
  SspProblem(Objective mean, std::shared_ptr<const NoiseModel> noise, ProblemConstants constants,
             std::optional<PrimalDualPair> saddle = std::nullopt)
      : mean_(std::move(mean)), noise_(std::move(noise)), constants_(std::move(constants)) {
    if (!noise_) noise_ = std::make_shared<NoNoise>();
    constants_.validate();
    if (saddle) set_saddle(std::move(*saddle));
  }

  const Objective& mean() const { return mean_; }
  Objective& mutable_mean() { return mean_; }
  const NoiseModel& noise() const { return *noise_; }
  const std::shared_ptr<const NoiseModel>& noise_ptr() const { return noise_; }
  const ProblemConstants& constants() const { return constants_; }
  ProblemConstants& mutable_constants() { return constants_; }

  Eigen::Index dim_x() const { return mean_.dim_x(); }
  Eigen::Index dim_y() const { return mean_.dim_y(); }
  const Domain& domain_x() const { return mean_.domain_x(); }
  const Domain& domain_y() const { return mean_.domain_y(); }
  bool constrained() const { return domain_x().bounded() || domain_y().bounded(); }

  double value(const Vec& x, const Vec& y) const { return mean_.value(x, y); }
  Vec grad_x(const Vec& x, const Vec& y) const { return mean_.grad_x(x, y); }
  Vec grad_y(const Vec& x, const Vec& y) const { return mean_.grad_y(x, y); }
  double inner_max(const Vec& x) const { return mean_.inner_max(x).value; }
  double inner_min(const Vec& y) const { return mean_.inner_min(y).value; }

  // One realization Phi_xi.
  Objective sample(Rng& rng) const {
    Objective o = mean_;
    noise_->draw(rng, o);
    return o;
  }
  // The empirical objective (1/n) sum_i Phi_xi_i.
  Objective empirical(std::size_t n, Rng& rng) const {
    Objective o = mean_;
    noise_->draw_mean(n, rng, o);
    return o;
  }
  PrimalDualPair sample_gradient(const Vec& x, const Vec& y, std::size_t n, Rng& rng) const {
    return noise_->sample_gradient(mean_, x, y, n, rng);
  }
  bool noiseless() const { return noise_->deterministic(); }

  const std::optional<PrimalDualPair>& saddle() const { return saddle_; }
  std::optional<double> saddle_value() const {
    if (!saddle_) return std::nullopt;
    return mean_.value(saddle_->x, saddle_->y);
  }
  void set_saddle(PrimalDualPair z) {
    if (z.x.size() != dim_x() || z.y.size() != dim_y()) throw DomainError("saddle dimension mismatch");
    saddle_ = std::move(z);
  }
  void clear_saddle() { saddle_.reset(); }

  // Upper bound on Delta_Phi - Delta_Phi_alpha for the problem this one was
  // regularized from (0 when not regularized).
  double gap_inflation() const { return gap_inflation_; }
  void set_gap_inflation(double v) { gap_inflation_ = v; }

 private:
  Objective mean_;
  std::shared_ptr<const NoiseModel> noise_;
  ProblemConstants constants_;
  std::optional<PrimalDualPair> saddle_;
  double gap_inflation_ = 0.0;
};

// Phi + lambda_x D_x(x, center_x) - lambda_y D_y(y, center_y) with D either
// 1/2 |.|^2 or the KL divergence.
struct PerturbedProblem {
  SspProblem problem;
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  std::optional<Vec> center_x;
  std::optional<Vec> center_y;
  ProxKind prox_kind_x = ProxKind::Quadratic;
  ProxKind prox_kind_y = ProxKind::Quadratic;

  operator const SspProblem&() const { return problem; }
};

namespace detail {

inline void add_prox_term(BlockTerms& h, const Domain& dom, double lambda, const Vec& center, ProxKind kind) {
  if (kind == ProxKind::KL) {
    if (dom.kind() != Domain::Kind::Simplex) throw CapabilityError("KL proximity needs a simplex block");
    h.add_kl(lambda, center);
  } else {
    h.add_quadratic(lambda, center);
  }
}

inline void shift_constants(std::optional<double>& mu, std::optional<double>& L, double lambda, ProxKind kind) {
  if (lambda == 0.0) return;
  if (mu) *mu += lambda;
  if (kind == ProxKind::Quadratic) {
    if (L) *L += lambda;
  } else {
    L.reset();
  }
}

}  // namespace detail

inline PerturbedProblem perturb(const SspProblem& base, double lambda_x, std::optional<Vec> center_x,
                                double lambda_y, std::optional<Vec> center_y,
                                ProxKind prox_kind_y = ProxKind::Quadratic,
                                ProxKind prox_kind_x = ProxKind::Quadratic) {
  if (!(lambda_x >= 0.0) || !(lambda_y >= 0.0)) throw DomainError("perturbation amplitudes must be nonnegative");
  if (lambda_x == 0.0) center_x.reset();
  if (lambda_y == 0.0) center_y.reset();
  if (lambda_x > 0.0 && !center_x) throw DomainError("positive lambda_x needs a center");
  if (lambda_y > 0.0 && !center_y) throw DomainError("positive lambda_y needs a center");
  if (prox_kind_x == ProxKind::KL && base.domain_x().kind() != Domain::Kind::Simplex)
    throw CapabilityError("KL proximity needs a simplex x block");
  if (prox_kind_y == ProxKind::KL && base.domain_y().kind() != Domain::Kind::Simplex)
    throw CapabilityError("KL proximity needs a simplex y block");
  if (center_x && !base.domain_x().contains(*center_x, 1e-9)) throw DomainError("center_x is infeasible");
  if (center_y && !base.domain_y().contains(*center_y, 1e-9)) throw DomainError("center_y is infeasible");

  PerturbedProblem out{base, lambda_x, lambda_y, center_x, center_y, prox_kind_x, prox_kind_y};
  if (lambda_x == 0.0 && lambda_y == 0.0) return out;

  Objective& obj = out.problem.mutable_mean();
  if (center_x) detail::add_prox_term(obj.hx, obj.domain_x(), lambda_x, *center_x, prox_kind_x);
  if (center_y) detail::add_prox_term(obj.hy, obj.domain_y(), lambda_y, *center_y, prox_kind_y);

  ProblemConstants& c = out.problem.mutable_constants();
  detail::shift_constants(c.mu_x, c.L_x, lambda_x, prox_kind_x);
  detail::shift_constants(c.mu_y, c.L_y, lambda_y, prox_kind_y);

  out.problem.clear_saddle();
  if (auto s = obj.exact_saddle()) out.problem.set_saddle(std::move(*s));
  return out;
}

// Strongly convex-concave surrogate of a convex-concave problem. Quadratic
// blocks get (alpha/2)|u - anchor|^2 with alpha = eps / (2 D^2); entropy blocks
// get eps / (4 log dim) * sum u log u. The duality gap of the original problem
// exceeds the surrogate's by at most the recorded gap_inflation().
inline SspProblem cc_regularize(const SspProblem& problem, double epsilon,
                                std::optional<PrimalDualPair> anchor = std::nullopt,
                                RegKind kind_x = RegKind::Quadratic, RegKind kind_y = RegKind::Quadratic) {
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be nonnegative");
  if (epsilon == 0.0) return problem;
  const ProblemConstants& c0 = problem.constants();
  const double Dx = detail::require(c0.D_x, "D_x");
  const double Dy = detail::require(c0.D_y, "D_y");
  if (!std::isfinite(Dx) || !std::isfinite(Dy) || !(Dx > 0.0) || !(Dy > 0.0))
    throw CapabilityError("regularization needs finite positive domain diameters");
  if (!anchor) anchor = PrimalDualPair(problem.domain_x().center(), problem.domain_y().center());

  SspProblem out = problem;
  Objective& obj = out.mutable_mean();
  ProblemConstants& c = out.mutable_constants();
  double inflation = 0.0;

  auto regularize = [&](BlockTerms& h, const Domain& dom, RegKind kind, double D, const Vec& a,
                        std::optional<double>& mu, std::optional<double>& L) {
    if (kind == RegKind::Quadratic) {
      const double alpha = epsilon / (2.0 * D * D);
      h.add_quadratic(alpha, a);
      mu = mu.value_or(0.0) + alpha;
      if (L) *L += alpha;
      inflation += 0.5 * alpha * D * D;
    } else {
      if (dom.kind() != Domain::Kind::Simplex || dom.dim() < 2)
        throw CapabilityError("entropy regularization needs a simplex block of dimension >= 2");
      const double logd = std::log(static_cast<double>(dom.dim()));
      const double w = epsilon / (4.0 * logd);
      h.add_entropy(w);
      mu = mu.value_or(0.0) + w;
      L.reset();
      inflation += w * logd;
    }
  };
  regularize(obj.hx, obj.domain_x(), kind_x, Dx, anchor->x, c.mu_x, c.L_x);
  regularize(obj.hy, obj.domain_y(), kind_y, Dy, anchor->y, c.mu_y, c.L_y);
  out.clear_saddle();
  out.set_gap_inflation(problem.gap_inflation() + inflation);
  return out;
}

}  // namespace pbssp
