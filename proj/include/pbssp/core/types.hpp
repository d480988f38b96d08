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
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace pbssp {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A candidate solution (x, y).
struct PrimalDualPair {
  Vec x;
  Vec y;

  PrimalDualPair() = default;
  PrimalDualPair(Vec x_, Vec y_) : x(std::move(x_)), y(std::move(y_)) {}

  // Concatenation [x; y], used by joint distance estimation.
  Vec stacked() const {
    Vec z(x.size() + y.size());
    z << x, y;
    return z;
  }
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid input (bad sizes, infeasible points, out-of-range parameters).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A required constant or evaluator is not available for this problem.
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A numerical procedure did not reach its tolerance.
class DiagnosticError : public Error {
 public:
  DiagnosticError(const std::string& what, std::optional<PrimalDualPair> last = {})
      : Error(what), last_iterate_(std::move(last)) {}
  const std::optional<PrimalDualPair>& last_iterate() const { return last_iterate_; }

 private:
  std::optional<PrimalDualPair> last_iterate_;
};

// Broken internal invariant; indicates a bug, not bad input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline double require(const std::optional<double>& v, const char* name) {
  if (!v) throw CapabilityError(std::string("problem constant '") + name + "' is not available");
  return *v;
}

// Ceiling that ignores relative rounding noise below 1e-12, so that
// 2 / (0.1 / 27) * 2 counts as 1080 rather than 1081.
inline std::size_t ceil_to_size(double v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("sample size is not a finite nonnegative number");
  return static_cast<std::size_t>(std::ceil(v * (1.0 - 1e-12)));
}

}  // namespace detail

// Structural constants of Phi. Missing entries raise CapabilityError on use.
struct ProblemConstants {
  std::optional<double> mu_x, mu_y;
  std::optional<double> L_x, L_y, L_xy;
  std::optional<double> ell_x, ell_y;
  std::optional<double> sigma_x, sigma_y;
  std::optional<double> C;
  std::optional<double> D_x, D_y;

  double mu() const {
    return std::min(detail::require(mu_x, "mu_x"), detail::require(mu_y, "mu_y"));
  }
  double L() const {
    return std::max({detail::require(L_x, "L_x"), detail::require(L_y, "L_y"),
                     detail::require(L_xy, "L_xy")});
  }
  double ell() const {
    return std::max(detail::require(ell_x, "ell_x"), detail::require(ell_y, "ell_y"));
  }
  double kappa() const {
    const double m = mu();
    if (!(m > 0.0)) throw CapabilityError("kappa needs mu > 0 (regularize a convex-concave problem first)");
    return L() / m;
  }
  double L_f() const {
    const double my = detail::require(mu_y, "mu_y");
    if (!(my > 0.0)) throw CapabilityError("L_f needs mu_y > 0");
    const double lxy = detail::require(L_xy, "L_xy");
    return detail::require(L_x, "L_x") + lxy * lxy / my;
  }
  double L_g() const {
    const double mx = detail::require(mu_x, "mu_x");
    if (!(mx > 0.0)) throw CapabilityError("L_g needs mu_x > 0");
    const double lxy = detail::require(L_xy, "L_xy");
    return detail::require(L_y, "L_y") + lxy * lxy / mx;
  }

  // Throws DomainError if the moduli and smoothness constants are inconsistent.
  void validate() const {
    auto check = [](const std::optional<double>& mu, const std::optional<double>& L, const char* which) {
      if (mu && *mu < 0.0) throw DomainError(std::string("negative modulus mu_") + which);
      if (mu && L && std::isfinite(*L) && *mu > 0.0 && *L > 0.0 && *mu > *L * (1.0 + 1e-12))
        throw DomainError(std::string("mu_") + which + " exceeds L_" + which);
    };
    check(mu_x, L_x, "x");
    check(mu_y, L_y, "y");
  }
};

// Cost of an oracle invocation. `samples` counts every draw of xi, including
// those spent on mini-batch gradients.
struct Accounting {
  std::size_t oracle_calls = 0;
  std::size_t gradient_calls = 0;
  std::size_t samples = 0;

  Accounting& operator+=(const Accounting& o) {
    oracle_calls += o.oracle_calls;
    gradient_calls += o.gradient_calls;
    samples += o.samples;
    return *this;
  }
  double weighted_calls(double gradient_weight) const {
    return static_cast<double>(oracle_calls) + gradient_weight * static_cast<double>(gradient_calls);
  }
};

inline Accounting operator+(Accounting a, const Accounting& b) { return a += b; }

enum class Block { X, Y };

}  // namespace pbssp
