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
#include <random>

#include "pbssp/core/problem.hpp"
#include "pbssp/oracles/extragradient.hpp"

namespace pbssp::problems {

// Zero-mean noise on the linear terms: cx = cx_mean + zeta_x, cy = cy_mean + zeta_y,
// each coordinate Gaussian or centered gamma with variance sigma^2.
class LinearNoise final : public NoiseModel {
 public:
  LinearNoise(Vec cx_mean, Vec cy_mean, double sigma, bool heavy_tailed)
      : cx_(std::move(cx_mean)), cy_(std::move(cy_mean)), sigma_(sigma), heavy_(heavy_tailed) {
    if (!(sigma >= 0.0)) throw DomainError("noise level must be nonnegative");
    if (heavy_) gamma_ = GammaLaw::from_moments(0.0, sigma * sigma > 0.0 ? sigma * sigma : 1.0);
  }

  void draw(Rng& rng, Objective& obj) const override { fill(1, rng, obj.cx, obj.cy); }
  void draw_mean(std::size_t n, Rng& rng, Objective& obj) const override {
    if (n == 0) throw DomainError("empirical average needs n >= 1");
    fill(n, rng, obj.cx, obj.cy);
  }
  PrimalDualPair sample_gradient(const Objective& mean, const Vec& x, const Vec& y, std::size_t n,
                                 Rng& rng) const override {
    if (n == 0) throw DomainError("gradient batch needs n >= 1");
    Vec zx(cx_.size()), zy(cy_.size());
    noise_mean(n, rng, zx);
    noise_mean(n, rng, zy);
    return {mean.grad_x(x, y) + zx, mean.grad_y(x, y) + zy};
  }
  bool deterministic() const override { return sigma_ == 0.0; }

  double sigma() const { return sigma_; }

 private:
  void noise_mean(std::size_t n, Rng& rng, Vec& out) const {
    if (sigma_ == 0.0) {
      out.setZero();
      return;
    }
    if (heavy_) {
      for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = gamma_.draw_mean(n, rng);
    } else {
      const double sd = sigma_ / std::sqrt(static_cast<double>(n));
      for (Eigen::Index j = 0; j < out.size(); ++j) out[j] = sd * standard_normal(rng);
    }
  }
  void fill(std::size_t n, Rng& rng, Vec& cx, Vec& cy) const {
    Vec zx(cx_.size()), zy(cy_.size());
    noise_mean(n, rng, zx);
    noise_mean(n, rng, zy);
    cx = cx_ + zx;
    cy = cy_ + zy;
  }

  Vec cx_, cy_;
  double sigma_;
  bool heavy_;
  GammaLaw gamma_;
};

struct QuadraticSpec {
  Eigen::Index d_x = 20;
  Eigen::Index d_y = 20;
  double mu = 1.0;
  double L = 8.0;
  double L_xy = 2.0;
  double sigma = 1.0;
  bool heavy_tailed = false;
  std::uint64_t seed = 1;
  std::optional<double> box_radius;  // box [-r, r]^d with diagonal A, Cmat
};

// Phi(x, y) = 1/2 x'Ax + x'By - 1/2 y'Cy + a'x - b'y.
struct QuadraticInstance {
  SspProblem problem;
  Mat A, B, Cm;
  Vec a, b;
};

namespace detail {

inline Mat random_orthogonal(Eigen::Index d, Rng& rng) {
  Mat G(d, d);
  for (Eigen::Index i = 0; i < G.size(); ++i) G.data()[i] = standard_normal(rng);
  Eigen::HouseholderQR<Mat> qr(G);
  Mat Q = qr.householderQ();
  const Mat R = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j)
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  return Q;
}

inline Vec spectrum(Eigen::Index d, double lo, double hi, Rng& rng) {
  Vec s(d);
  std::uniform_real_distribution<double> u(lo, hi);
  for (Eigen::Index i = 0; i < d; ++i) s[i] = u(rng);
  s[0] = lo;
  if (d > 1) s[d - 1] = hi;
  return s;
}

}  // namespace detail

inline QuadraticInstance make_quadratic_instance(const QuadraticSpec& spec) {
  if (spec.d_x < 1 || spec.d_y < 1) throw DomainError("quadratic dimensions must be positive");
  if (!(spec.mu > 0.0) || !(spec.mu <= spec.L)) throw DomainError("quadratic spectrum needs 0 < mu <= L");
  if ((spec.d_x == 1 || spec.d_y == 1) && spec.mu != spec.L)
    throw DomainError("a one-dimensional block cannot span [mu, L] with mu < L");
  if (!(spec.L_xy >= 0.0)) throw DomainError("L_xy must be nonnegative");
  if (spec.box_radius && !(*spec.box_radius > 0.0)) throw DomainError("box radius must be positive");

  Rng rng = make_stream(spec.seed, 0x51ab);
  const Eigen::Index dx = spec.d_x, dy = spec.d_y;
  const bool boxed = spec.box_radius.has_value();
  const Vec ex = detail::spectrum(dx, spec.mu, spec.L, rng);
  const Vec ey = detail::spectrum(dy, spec.mu, spec.L, rng);
  Mat A, Cm;
  if (boxed) {
    A = ex.asDiagonal();
    Cm = ey.asDiagonal();
  } else {
    const Mat Ux = detail::random_orthogonal(dx, rng);
    const Mat Uy = detail::random_orthogonal(dy, rng);
    A = Ux * ex.asDiagonal() * Ux.transpose();
    Cm = Uy * ey.asDiagonal() * Uy.transpose();
    A = 0.5 * (A + A.transpose()).eval();
    Cm = 0.5 * (Cm + Cm.transpose()).eval();
  }
  const Eigen::Index r = std::min(dx, dy);
  Vec s = detail::spectrum(r, 0.0, spec.L_xy, rng);
  s[0] = spec.L_xy;
  const Mat Vx = detail::random_orthogonal(dx, rng);
  const Mat Vy = detail::random_orthogonal(dy, rng);
  const Mat B = Vx.leftCols(r) * s.asDiagonal() * Vy.leftCols(r).transpose();
  Vec a(dx), b(dy);
  for (Eigen::Index i = 0; i < dx; ++i) a[i] = standard_normal(rng);
  for (Eigen::Index i = 0; i < dy; ++i) b[i] = standard_normal(rng);

  Domain dom_x = boxed ? Domain::box(dx, -*spec.box_radius, *spec.box_radius) : Domain::free(dx);
  Domain dom_y = boxed ? Domain::box(dy, -*spec.box_radius, *spec.box_radius) : Domain::free(dy);
  Objective obj(dom_x, dom_y);
  if (boxed) {
    obj.hx.add_quadratic(ex);
    obj.hy.add_quadratic(ey);
  } else {
    obj.Qx = A;
    obj.Qy = Cm;
  }
  obj.K = B;
  obj.cx = a;
  obj.cy = -b;

  ProblemConstants c;
  c.mu_x = spec.mu;
  c.mu_y = spec.mu;
  c.L_x = spec.L;
  c.L_y = spec.L;
  c.L_xy = spec.L_xy;
  c.sigma_x = spec.sigma * std::sqrt(static_cast<double>(dx));
  c.sigma_y = spec.sigma * std::sqrt(static_cast<double>(dy));

  auto noise = std::make_shared<LinearNoise>(obj.cx, obj.cy, spec.sigma, spec.heavy_tailed);
  std::optional<PrimalDualPair> saddle = obj.exact_saddle();
  if (boxed) {
    oracles::ExtragradientOptions eg;
    eg.tol = 1e-13;
    saddle = oracles::extragradient_solve(obj, eg).z;
    const double R = *spec.box_radius;
    const double Rx = R * std::sqrt(static_cast<double>(dx)), Ry = R * std::sqrt(static_cast<double>(dy));
    const double Gx = spec.L * Rx + spec.L_xy * Ry + a.norm();
    const double Gy = spec.L * Ry + spec.L_xy * Rx + b.norm();
    c.ell_x = std::sqrt(Gx * Gx + *c.sigma_x * *c.sigma_x);
    c.ell_y = std::sqrt(Gy * Gy + *c.sigma_y * *c.sigma_y);
    c.D_x = dom_x.diameter();
    c.D_y = dom_y.diameter();
  }
  if (!saddle) throw InvariantError("quadratic benchmark has no saddle");
  const Vec gx = obj.grad_x(saddle->x, saddle->y), gy = obj.grad_y(saddle->x, saddle->y);
  const double grad_sq = boxed ? gx.squaredNorm() + gy.squaredNorm() : 0.0;
  c.C = grad_sq + spec.sigma * spec.sigma * static_cast<double>(dx + dy);

  SspProblem problem(std::move(obj), noise, c, saddle);
  return {std::move(problem), A, B, Cm, a, b};
}

inline SspProblem make_quadratic(Eigen::Index d_x, Eigen::Index d_y, double mu, double L, double L_xy, double sigma,
                                 bool heavy_tailed, std::uint64_t seed) {
  QuadraticSpec s;
  s.d_x = d_x;
  s.d_y = d_y;
  s.mu = mu;
  s.L = L;
  s.L_xy = L_xy;
  s.sigma = sigma;
  s.heavy_tailed = heavy_tailed;
  s.seed = seed;
  return make_quadratic_instance(s).problem;
}

}  // namespace pbssp::problems
