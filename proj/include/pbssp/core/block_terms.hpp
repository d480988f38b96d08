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
#include <optional>

#include "pbssp/core/domain.hpp"
#include "pbssp/core/types.hpp"

namespace pbssp {

enum class Geometry { Euclidean, Entropic };

// Separable convex terms attached to one block, kept in aggregated form
//
//   h(u) = 1/2 sum_j w_j u_j^2 - <b, u> + k + E sum_j u_j log u_j - <e, u>.
//
// Quadratic terms w/2 |u - c|^2 and entropy/KL terms E sum u log(u / c) are
// folded into (w, b, k) and (E, e). A block may carry terms of one family only
// when closed-form minimization is required.
class BlockTerms {
 public:
  explicit BlockTerms(Eigen::Index d = 0) : w_(Vec::Zero(d)), b_(Vec::Zero(d)), e_(Vec::Zero(d)) {}

  Eigen::Index dim() const { return w_.size(); }

  void add_quadratic(double weight, const std::optional<Vec>& center = std::nullopt) {
    add_quadratic(Vec::Constant(dim(), weight), center);
  }
  void add_quadratic(const Vec& weights, const std::optional<Vec>& center = std::nullopt) {
    if (weights.size() != dim()) throw DomainError("quadratic weight size mismatch");
    if ((weights.array() < 0.0).any()) throw DomainError("negative quadratic weight");
    w_ += weights;
    if (center) {
      if (center->size() != dim()) throw DomainError("quadratic center size mismatch");
      b_ += weights.cwiseProduct(*center);
      k_ += 0.5 * weights.dot(center->cwiseProduct(*center));
    }
  }
  void add_entropy(double weight) {
    if (weight < 0.0) throw DomainError("negative entropy weight");
    ent_w_ += weight;
  }
  void add_kl(double weight, const Vec& center) {
    if (weight < 0.0) throw DomainError("negative KL weight");
    if (center.size() != dim()) throw DomainError("KL center size mismatch");
    if (weight == 0.0) return;
    ent_w_ += weight;
    e_ += weight * center.array().log().matrix();
  }

  bool has_quadratic() const { return (w_.array() > 0.0).any(); }
  bool entropic() const { return ent_w_ > 0.0; }
  bool empty() const { return !has_quadratic() && !entropic() && (b_.array() == 0.0).all(); }

  const Vec& quad_weight() const { return w_; }
  const Vec& quad_linear() const { return b_; }
  double quad_const() const { return k_; }
  double ent_weight() const { return ent_w_; }
  const Vec& ent_linear() const { return e_; }

  double value(const Vec& u) const {
    double v = 0.5 * w_.dot(u.cwiseProduct(u)) - b_.dot(u) + k_;
    if (ent_w_ > 0.0) {
      for (Eigen::Index j = 0; j < u.size(); ++j) {
        if (u[j] < 0.0) return kInf;
        if (u[j] > 0.0) v += ent_w_ * u[j] * std::log(u[j]) - e_[j] * u[j];
      }
    }
    return v;
  }

  // Gradient at u; entropy contributions are evaluated at max(u, tiny).
  Vec gradient(const Vec& u) const {
    Vec g = w_.cwiseProduct(u) - b_;
    if (ent_w_ > 0.0) {
      const double tiny = 1e-300;
      for (Eigen::Index j = 0; j < u.size(); ++j) g[j] += ent_w_ * (std::log(std::max(u[j], tiny)) + 1.0) - e_[j];
    }
    return g;
  }

 private:
  Vec w_, b_;
  double k_ = 0.0;
  double ent_w_ = 0.0;
  Vec e_;
};

struct BlockMin {
  Vec arg;
  double value = 0.0;
};

namespace detail {

inline Vec softmax_of(const Vec& s) {
  const double mx = s.maxCoeff();
  if (!std::isfinite(mx)) throw DomainError("entropic step has no finite coordinate");
  Vec p = (s.array() - mx).exp().matrix();
  return p / p.sum();
}

inline double logsumexp(const Vec& s) {
  const double mx = s.maxCoeff();
  return mx + std::log((s.array() - mx).exp().sum());
}

// argmin_u <g, u> + 1/2 sum W_j u_j^2 - <B, u> over a domain (no entropy).
inline Vec separable_quadratic_argmin(const Domain& dom, const Vec& W, const Vec& B, const Vec& g) {
  const Eigen::Index d = g.size();
  switch (dom.kind()) {
    case Domain::Kind::Free: {
      if ((W.array() <= 0.0).any()) throw CapabilityError("unbounded block minimization on a free domain");
      return (B - g).cwiseQuotient(W);
    }
    case Domain::Kind::Box: {
      Vec u(d);
      for (Eigen::Index j = 0; j < d; ++j) {
        const double lo = dom.lower()[j], hi = dom.upper()[j];
        if (W[j] > 0.0) {
          u[j] = std::clamp((B[j] - g[j]) / W[j], lo, hi);
        } else {
          const double c = g[j] - B[j];
          u[j] = c > 0.0 ? lo : (c < 0.0 ? hi : std::clamp(0.0, lo, hi));
        }
      }
      return u;
    }
    case Domain::Kind::Simplex: {
      const double w0 = W[0];
      if ((W.array() != w0).any())
        throw CapabilityError("non-isotropic quadratic terms on a simplex block are not supported");
      if (w0 > 0.0) return project_simplex((B - g) / w0);
      Vec u = Vec::Zero(d);
      Eigen::Index k = 0;
      (g - B).minCoeff(&k);
      u[k] = 1.0;
      return u;
    }
  }
  return g;
}

}  // namespace detail

// min_u <g, u> + 1/2 u'Qu + h(u) over the domain, in closed form.
// Q may be null; a dense Q is supported on free domains only.
inline BlockMin block_argmin(const Domain& dom, const BlockTerms& h, const Mat* Q, const Vec& g) {
  dom.check_size(g);
  const bool dense = Q != nullptr && Q->size() > 0 && !Q->isZero(0.0);
  BlockMin out;
  if (h.entropic()) {
    if (dom.kind() != Domain::Kind::Simplex) throw CapabilityError("entropy terms need a simplex block");
    if (dense || h.has_quadratic())
      throw CapabilityError("mixing entropy and quadratic terms on one block has no closed form");
    const double E = h.ent_weight();
    const Vec s = (h.ent_linear() - g) / E;
    out.arg = detail::softmax_of(s);
    out.value = -E * detail::logsumexp(s) + h.quad_const();
    return out;
  }
  if (dense) {
    if (dom.kind() != Domain::Kind::Free) throw CapabilityError("dense quadratic blocks need a free domain");
    Mat H = *Q;
    H.diagonal() += h.quad_weight();
    Eigen::LLT<Mat> llt(H);
    if (llt.info() != Eigen::Success) throw CapabilityError("block Hessian is not positive definite");
    out.arg = llt.solve(h.quad_linear() - g);
    out.value = g.dot(out.arg) + 0.5 * out.arg.dot(*Q * out.arg) + h.value(out.arg);
    return out;
  }
  out.arg = detail::separable_quadratic_argmin(dom, h.quad_weight(), h.quad_linear(), g);
  out.value = g.dot(out.arg) + h.value(out.arg);
  return out;
}

// argmin_u <g, u> + h(u) + D(u, center) / step, where D is 1/2 |u - center|^2
// (Euclidean) or the KL divergence (Entropic). Used by first-order solvers.
inline Vec prox_step(const Domain& dom, const BlockTerms& h, Geometry geo, const Vec& center, const Vec& g,
                     double step) {
  const double inv = 1.0 / step;
  if (geo == Geometry::Entropic) {
    if (dom.kind() != Domain::Kind::Simplex) throw CapabilityError("entropic steps need a simplex block");
    if (h.has_quadratic()) throw CapabilityError("entropic steps cannot absorb quadratic terms");
    const double E = h.ent_weight() + inv;
    Vec s(g.size());
    for (Eigen::Index j = 0; j < g.size(); ++j) {
      const double lc = center[j] > 0.0 ? std::log(center[j]) : -kInf;
      s[j] = (h.ent_linear()[j] + inv * lc - g[j]) / E;
    }
    return detail::softmax_of(s);
  }
  if (h.entropic()) throw CapabilityError("Euclidean steps cannot absorb entropy terms");
  const Vec W = h.quad_weight().array() + inv;
  const Vec B = h.quad_linear() + inv * center;
  return detail::separable_quadratic_argmin(dom, W, B, g);
}

inline Geometry natural_geometry(const BlockTerms& h) {
  return h.entropic() ? Geometry::Entropic : Geometry::Euclidean;
}

}  // namespace pbssp
