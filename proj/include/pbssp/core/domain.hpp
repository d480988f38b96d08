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

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "pbssp/core/types.hpp"

namespace pbssp {

inline constexpr double kFeasTol = 1e-12;

// Euclidean projection onto the probability simplex (sorted-threshold rule).
inline Vec project_simplex(const Vec& v) {
  const Eigen::Index d = v.size();
  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

// Feasible set of one block: all of R^d, a box, or the probability simplex.
class Domain {
 public:
  enum class Kind { Free, Box, Simplex };

  static Domain free(Eigen::Index d) { return Domain(Kind::Free, d, {}, {}); }
  static Domain simplex(Eigen::Index d) {
    if (d < 1) throw DomainError("simplex dimension must be positive");
    return Domain(Kind::Simplex, d, {}, {});
  }
  static Domain box(Vec lo, Vec hi) {
    if (lo.size() != hi.size()) throw DomainError("box bounds differ in size");
    if ((lo.array() > hi.array()).any()) throw DomainError("box lower bound exceeds upper bound");
    const Eigen::Index d = lo.size();
    return Domain(Kind::Box, d, std::move(lo), std::move(hi));
  }
  static Domain box(Eigen::Index d, double lo, double hi) {
    return box(Vec::Constant(d, lo), Vec::Constant(d, hi));
  }

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  bool bounded() const { return kind_ != Kind::Free; }
  const Vec& lower() const { return lo_; }
  const Vec& upper() const { return hi_; }

  Vec project(const Vec& v) const {
    check_size(v);
    switch (kind_) {
      case Kind::Free:
        return v;
      case Kind::Box:
        return v.cwiseMax(lo_).cwiseMin(hi_);
      case Kind::Simplex:
        return project_simplex(v);
    }
    return v;
  }

  bool contains(const Vec& v, double tol = kFeasTol) const {
    if (v.size() != dim_) return false;
    if (!v.allFinite()) return false;
    switch (kind_) {
      case Kind::Free:
        return true;
      case Kind::Box:
        return ((v - lo_).array() >= -tol).all() && ((hi_ - v).array() >= -tol).all();
      case Kind::Simplex:
        return (v.array() >= -tol).all() && std::abs(v.sum() - 1.0) <= tol * std::max<double>(1.0, dim_);
    }
    return false;
  }

  // A canonical interior starting point.
  Vec center() const {
    switch (kind_) {
      case Kind::Free:
        return Vec::Zero(dim_);
      case Kind::Box:
        return 0.5 * (lo_ + hi_);
      case Kind::Simplex:
        return Vec::Constant(dim_, 1.0 / static_cast<double>(dim_));
    }
    return Vec::Zero(dim_);
  }

  double diameter() const {
    switch (kind_) {
      case Kind::Free:
        return kInf;
      case Kind::Box:
        return (hi_ - lo_).norm();
      case Kind::Simplex:
        return dim_ > 1 ? std::sqrt(2.0) : 0.0;
    }
    return kInf;
  }

  void check_size(const Vec& v) const {
    if (v.size() != dim_) throw DomainError("vector size does not match the domain dimension");
  }

 private:
  Domain(Kind k, Eigen::Index d, Vec lo, Vec hi) : kind_(k), dim_(d), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (d < 0) throw DomainError("negative dimension");
  }

  Kind kind_;
  Eigen::Index dim_;
  Vec lo_, hi_;
};

}  // namespace pbssp
