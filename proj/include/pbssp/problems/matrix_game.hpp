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
#include <random>
#include <vector>

#include "pbssp/core/problem.hpp"
#include "pbssp/problems/regularization.hpp"

namespace pbssp::problems {

// Payoff matrix with independent gamma entries: mean A_mean(i, j), variance sigma_A^2.
class GameNoise final : public NoiseModel {
 public:
  GameNoise(const Mat& A_mean, double sigma_A) {
    laws_.reserve(static_cast<std::size_t>(A_mean.size()));
    for (Eigen::Index k = 0; k < A_mean.size(); ++k)
      laws_.push_back(GammaLaw::from_moments(A_mean.data()[k], sigma_A * sigma_A));
  }

  void draw(Rng& rng, Objective& obj) const override {
    for (std::size_t k = 0; k < laws_.size(); ++k) obj.K.data()[k] = laws_[k].draw(rng);
  }
  void draw_mean(std::size_t n, Rng& rng, Objective& obj) const override {
    if (n == 0) throw DomainError("empirical average needs n >= 1");
    for (std::size_t k = 0; k < laws_.size(); ++k) obj.K.data()[k] = laws_[k].draw_mean(n, rng);
  }

 private:
  std::vector<GammaLaw> laws_;
};

struct MatrixGame {
  SspProblem problem;
  Mat A_mean;
};

// Phi(x, y) = x' E[A_xi] y over two simplices, entries of A_mean uniform in (0, 1).
inline MatrixGame make_matrix_game_instance(Eigen::Index N_x, Eigen::Index N_y, double sigma_A, std::uint64_t seed,
                                            Regularization reg = Regularization::None, double epsilon = 0.0) {
  if (N_x < 2 || N_y < 2) throw DomainError("matrix game needs at least two strategies per player");
  if (!(sigma_A > 0.0)) throw DomainError("payoff noise must have positive variance");
  if (reg == Regularization::Quadratic) throw CapabilityError("matrix game supports entropy regularization only");
  Rng rng = make_stream(seed, 0x9a3e);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Mat A(N_x, N_y);
  for (Eigen::Index k = 0; k < A.size(); ++k) {
    double v = u(rng);
    while (v <= 0.0) v = u(rng);
    A.data()[k] = v;
  }

  Objective obj(Domain::simplex(N_x), Domain::simplex(N_y));
  obj.K = A;
  ProblemConstants c;
  c.mu_x = 0.0;
  c.mu_y = 0.0;
  c.L_x = 0.0;
  c.L_y = 0.0;
  c.L_xy = Objective::spectral_norm(A);
  c.D_x = std::sqrt(2.0);
  c.D_y = std::sqrt(2.0);
  const double s2 = sigma_A * sigma_A;
  c.sigma_x = std::sqrt(static_cast<double>(N_x) * s2);
  c.sigma_y = std::sqrt(static_cast<double>(N_y) * s2);
  c.ell_x = std::sqrt(A.colwise().squaredNorm().maxCoeff() + static_cast<double>(N_x) * s2);
  c.ell_y = std::sqrt(A.rowwise().squaredNorm().maxCoeff() + static_cast<double>(N_y) * s2);

  SspProblem base(std::move(obj), std::make_shared<GameNoise>(A, sigma_A), c);
  if (reg == Regularization::Entropy && epsilon > 0.0)
    return {cc_regularize(base, epsilon, std::nullopt, RegKind::Entropy, RegKind::Entropy), A};
  return {std::move(base), A};
}

inline SspProblem make_matrix_game(Eigen::Index N_x, Eigen::Index N_y, double sigma_A, std::uint64_t seed,
                                   Regularization reg = Regularization::None, double epsilon = 0.0) {
  return make_matrix_game_instance(N_x, N_y, sigma_A, seed, reg, epsilon).problem;
}

}  // namespace pbssp::problems
