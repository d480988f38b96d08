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
#include <utility>

#include "pbssp/core/block_terms.hpp"
#include "pbssp/core/domain.hpp"
#include "pbssp/core/types.hpp"

namespace pbssp {

struct InnerResult {
  double value = 0.0;
  Vec arg;
};

// Deterministic saddle function of the form
//
//   Phi(x, y) = 1/2 x'Qx x - 1/2 y'Qy y + x'K y + cx'x + cy'y + offset + hx(x) - hy(y)
//
// over Domain_x x Domain_y, with separable convex block terms hx, hy. Each
// realization Phi_xi, each empirical average and each proximal perturbation
// of a benchmark problem is an Objective.
class Objective {
 public:
  Objective(Domain dx, Domain dy)
      : dom_x_(std::move(dx)),
        dom_y_(std::move(dy)),
        K(Mat::Zero(dom_x_.dim(), dom_y_.dim())),
        cx(Vec::Zero(dom_x_.dim())),
        cy(Vec::Zero(dom_y_.dim())),
        hx(dom_x_.dim()),
        hy(dom_y_.dim()) {}

  const Domain& domain_x() const { return dom_x_; }
  const Domain& domain_y() const { return dom_y_; }
  Eigen::Index dim_x() const { return dom_x_.dim(); }
  Eigen::Index dim_y() const { return dom_y_.dim(); }

  bool has_Qx() const { return Qx.size() > 0; }
  bool has_Qy() const { return Qy.size() > 0; }

  double value(const Vec& x, const Vec& y) const {
    double v = x.dot(K * y) + cx.dot(x) + cy.dot(y) + offset + hx.value(x) - hy.value(y);
    if (has_Qx()) v += 0.5 * x.dot(Qx * x);
    if (has_Qy()) v -= 0.5 * y.dot(Qy * y);
    return v;
  }

  Vec smooth_grad_x(const Vec& x, const Vec& y) const {
    Vec g = K * y + cx;
    if (has_Qx()) g.noalias() += Qx * x;
    return g;
  }
  Vec smooth_grad_y(const Vec& x, const Vec& y) const {
    Vec g = K.transpose() * x + cy;
    if (has_Qy()) g.noalias() -= Qy * y;
    return g;
  }
  Vec grad_x(const Vec& x, const Vec& y) const { return smooth_grad_x(x, y) + hx.gradient(x); }
  Vec grad_y(const Vec& x, const Vec& y) const { return smooth_grad_y(x, y) - hy.gradient(y); }

  // f(x) = max_y Phi(x, y) and the maximizer.
  InnerResult inner_max(const Vec& x) const {
    dom_x_.check_size(x);
    double fixed = cx.dot(x) + offset + hx.value(x);
    if (has_Qx()) fixed += 0.5 * x.dot(Qx * x);
    const Vec g = -(K.transpose() * x + cy);
    const BlockMin bm = block_argmin(dom_y_, hy, has_Qy() ? &Qy : nullptr, g);
    return {fixed - bm.value, bm.arg};
  }

  // g(y) = min_x Phi(x, y) and the minimizer.
  InnerResult inner_min(const Vec& y) const {
    dom_y_.check_size(y);
    double fixed = cy.dot(y) + offset - hy.value(y);
    if (has_Qy()) fixed -= 0.5 * y.dot(Qy * y);
    const Vec g = K * y + cx;
    const BlockMin bm = block_argmin(dom_x_, hx, has_Qx() ? &Qx : nullptr, g);
    return {fixed + bm.value, bm.arg};
  }

  // Closed-form saddle for unconstrained quadratic instances.
  std::optional<PrimalDualPair> exact_saddle() const {
    if (dom_x_.kind() != Domain::Kind::Free || dom_y_.kind() != Domain::Kind::Free) return std::nullopt;
    if (hx.entropic() || hy.entropic()) return std::nullopt;
    const Eigen::Index dx = dim_x(), dy = dim_y();
    Mat J = Mat::Zero(dx + dy, dx + dy);
    if (has_Qx()) J.topLeftCorner(dx, dx) = Qx;
    if (has_Qy()) J.bottomRightCorner(dy, dy) = -Qy;
    J.topLeftCorner(dx, dx).diagonal() += hx.quad_weight();
    J.bottomRightCorner(dy, dy).diagonal() -= hy.quad_weight();
    J.topRightCorner(dx, dy) = K;
    J.bottomLeftCorner(dy, dx) = K.transpose();
    Vec rhs(dx + dy);
    rhs << hx.quad_linear() - cx, -cy - hy.quad_linear();
    Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible()) return std::nullopt;
    const Vec z = lu.solve(rhs);
    return PrimalDualPair(z.head(dx), z.tail(dy));
  }

  // Geometry used by first-order steps on each block.
  Geometry geometry_x() const { return geo_x_.value_or(natural_geometry(hx)); }
  Geometry geometry_y() const { return geo_y_.value_or(natural_geometry(hy)); }
  void set_geometry(std::optional<Geometry> gx, std::optional<Geometry> gy) {
    geo_x_ = gx;
    geo_y_ = gy;
  }

  // Descent step on x with (smooth) gradient g.
  Vec prox_x(const Vec& center, const Vec& g, double step) const {
    return prox_step(dom_x_, hx, geometry_x(), center, g, step);
  }
  // Ascent step on y with (smooth) gradient g.
  Vec prox_y(const Vec& center, const Vec& g, double step) const {
    return prox_step(dom_y_, hy, geometry_y(), center, -g, step);
  }

  // Upper bound on the Lipschitz constant of the smooth monotone operator
  // (grad_x S, -grad_y S) in the Euclidean norm.
  double smooth_lipschitz() const {
    double q = 0.0;
    if (has_Qx()) q = std::max(q, sym_norm(Qx));
    if (has_Qy()) q = std::max(q, sym_norm(Qy));
    return q + spectral_norm(K);
  }

  static double spectral_norm(const Mat& M) {
    if (M.size() == 0) return 0.0;
    const Mat G = M.rows() <= M.cols() ? Mat(M * M.transpose()) : Mat(M.transpose() * M);
    Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  }
  static double sym_norm(const Mat& S) {
    Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }

 private:
  Domain dom_x_, dom_y_;
  std::optional<Geometry> geo_x_, geo_y_;

 public:
  Mat Qx, Qy;
  Mat K;
  Vec cx, cy;
  double offset = 0.0;
  BlockTerms hx, hy;
};

}  // namespace pbssp
