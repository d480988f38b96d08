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

// Finite average-reward MDP with a generative model. Index (s, a) maps to the
// column s * A + a of the dual variable y.
struct MdpModel {
  int S = 0;
  int A = 0;
  std::vector<Mat> P;  // P[a] is S x S, row-stochastic
  Mat r;               // S x A mean rewards in (0, 1)
  double reward_sigma = 1.0;
  double U_x = 0.5;

  Eigen::Index col(int s, int a) const { return static_cast<Eigen::Index>(s) * A + a; }

  void validate() const {
    if (S < 1 || A < 1) throw DomainError("MDP needs at least one state and one action");
    if (static_cast<int>(P.size()) != A) throw DomainError("MDP needs one transition matrix per action");
    for (const Mat& Pa : P) {
      if (Pa.rows() != S || Pa.cols() != S) throw DomainError("transition matrix has the wrong shape");
      if ((Pa.array() < 0.0).any()) throw DomainError("negative transition probability");
      if (((Pa.rowwise().sum().array() - 1.0).abs() > 1e-12).any()) throw DomainError("transition rows must sum to 1");
    }
    if (r.rows() != S || r.cols() != A) throw DomainError("reward table has the wrong shape");
    if ((r.array() <= 0.0).any() || (r.array() >= 1.0).any()) throw DomainError("mean rewards must lie in (0, 1)");
    if (!(reward_sigma > 0.0)) throw DomainError("reward noise must have positive variance");
    if (!(U_x > 0.0)) throw DomainError("U_x must be positive");
  }

  // Coupling matrix K (S x SA): column (s, a) is P_a(s, .)' - e_s.
  Mat coupling() const {
    Mat K = Mat::Zero(S, static_cast<Eigen::Index>(S) * A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) {
        K.col(col(s, a)) = P[a].row(s).transpose();
        K(s, col(s, a)) -= 1.0;
      }
    return K;
  }
  Vec reward_vector() const {
    Vec v(static_cast<Eigen::Index>(S) * A);
    for (int s = 0; s < S; ++s)
      for (int a = 0; a < A; ++a) v[col(s, a)] = r(s, a);
    return v;
  }
};

// Random MDP: transition rows uniform on the simplex, rewards uniform in (0, 1).
inline MdpModel make_random_mdp(int S, int A, std::uint64_t seed, double U_x = 0.5, double reward_sigma = 1.0) {
  MdpModel m;
  m.S = S;
  m.A = A;
  m.U_x = U_x;
  m.reward_sigma = reward_sigma;
  Rng rng = make_stream(seed, 0x3d9);
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> ur(0.0, 1.0);
  for (int a = 0; a < A; ++a) {
    Mat Pa(S, S);
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < S; ++t) Pa(s, t) = ex(rng);
      Pa.row(s) /= Pa.row(s).sum();
    }
    m.P.push_back(Pa);
  }
  m.r.resize(S, A);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      double v = ur(rng);
      while (v <= 0.0) v = ur(rng);
      m.r(s, a) = v;
    }
  m.validate();
  return m;
}

// One generator draw: a next state per (s, a) and a reward per (s, a).
struct MdpSample {
  std::vector<int> next;  // indexed by column (s, a)
  Vec reward;
};

class MdpNoise final : public NoiseModel {
 public:
  explicit MdpNoise(const MdpModel& mdp) : S_(mdp.S), A_(mdp.A), P_(mdp.P) {
    const Vec r = mdp.reward_vector();
    laws_.reserve(static_cast<std::size_t>(r.size()));
    for (Eigen::Index k = 0; k < r.size(); ++k)
      laws_.push_back(GammaLaw::from_moments(r[k], mdp.reward_sigma * mdp.reward_sigma));
    rows_.resize(static_cast<std::size_t>(S_) * A_);
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        const Vec row = P_[a].row(s).transpose();
        rows_[static_cast<std::size_t>(s) * A_ + a] =
            std::discrete_distribution<int>(row.data(), row.data() + row.size());
      }
  }

  MdpSample sample(Rng& rng) const {
    MdpSample out;
    out.next.resize(rows_.size());
    out.reward.resize(static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      auto d = rows_[k];
      out.next[k] = d(rng);
      out.reward[static_cast<Eigen::Index>(k)] = laws_[k].draw(rng);
    }
    return out;
  }

  void draw(Rng& rng, Objective& obj) const override {
    const MdpSample smp = sample(rng);
    obj.K.setZero();
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        const Eigen::Index c = static_cast<Eigen::Index>(s) * A_ + a;
        obj.K(smp.next[static_cast<std::size_t>(c)], c) += 1.0;
        obj.K(s, c) -= 1.0;
      }
    obj.cy = smp.reward;
  }

  // Empirical transition frequencies are multinomial counts, drawn by
  // sequential binomial splitting; the reward mean is an exact gamma draw.
  void draw_mean(std::size_t n, Rng& rng, Objective& obj) const override {
    if (n == 0) throw DomainError("empirical average needs n >= 1");
    const double inv = 1.0 / static_cast<double>(n);
    obj.K.setZero();
    for (int s = 0; s < S_; ++s)
      for (int a = 0; a < A_; ++a) {
        const Eigen::Index c = static_cast<Eigen::Index>(s) * A_ + a;
        std::size_t left = n;
        double mass = 1.0;
        for (int t = 0; t < S_ && left > 0; ++t) {
          const double p = P_[a](s, t);
          std::size_t cnt = left;
          if (t < S_ - 1) {
            const double q = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
            std::binomial_distribution<std::size_t> bin(left, q);
            cnt = bin(rng);
          }
          obj.K(t, c) = static_cast<double>(cnt) * inv;
          left -= cnt;
          mass -= p;
        }
        obj.K(s, c) -= 1.0;
        obj.cy[c] = laws_[static_cast<std::size_t>(c)].draw_mean(n, rng);
      }
  }

 private:
  int S_, A_;
  std::vector<Mat> P_;
  std::vector<GammaLaw> laws_;
  std::vector<std::discrete_distribution<int>> rows_;
};

inline MdpSample mdp_sample(const MdpModel& mdp, Rng& rng) { return MdpNoise(mdp).sample(rng); }

// Phi(x, y) = sum_a y_a'(P_a - I) x + <r, y> over |x|_inf <= U_x and the
// simplex of dimension S * A; optionally regularized to an SC-SC surrogate.
inline SspProblem make_mdp_ssp(const MdpModel& mdp, Regularization reg = Regularization::None, double epsilon = 0.0) {
  mdp.validate();
  const Eigen::Index SA = static_cast<Eigen::Index>(mdp.S) * mdp.A;
  Objective obj(Domain::box(mdp.S, -mdp.U_x, mdp.U_x), Domain::simplex(SA));
  obj.K = mdp.coupling();
  obj.cy = mdp.reward_vector();

  ProblemConstants c;
  c.mu_x = 0.0;
  c.mu_y = 0.0;
  c.L_x = 0.0;
  c.L_y = 0.0;
  c.L_xy = Objective::spectral_norm(obj.K);
  // Squared radius of the box around the anchor x' = 0 and the simplex diameter.
  c.D_x = mdp.U_x * std::sqrt(static_cast<double>(mdp.S));
  c.D_y = std::sqrt(2.0);
  double sx2 = 0.0, ly2 = 0.0, sy2 = 0.0;
  for (int s = 0; s < mdp.S; ++s)
    for (int a = 0; a < mdp.A; ++a) {
      sx2 = std::max(sx2, 1.0 - mdp.P[a].row(s).squaredNorm());
      const double rs = mdp.r(s, a), v = mdp.reward_sigma * mdp.reward_sigma;
      sy2 += mdp.U_x * mdp.U_x + v;
      ly2 += (2.0 * mdp.U_x + rs) * (2.0 * mdp.U_x + rs) + v;
    }
  c.sigma_x = std::sqrt(sx2);
  c.sigma_y = std::sqrt(sy2);
  c.ell_x = std::sqrt(2.0);
  c.ell_y = std::sqrt(ly2);

  SspProblem base(std::move(obj), std::make_shared<MdpNoise>(mdp), c);
  if (reg == Regularization::None || epsilon == 0.0) return base;
  const PrimalDualPair anchor(Vec::Zero(mdp.S), Vec::Constant(SA, 1.0 / static_cast<double>(SA)));
  return cc_regularize(base, epsilon, anchor, RegKind::Quadratic,
                       reg == Regularization::Entropy ? RegKind::Entropy : RegKind::Quadratic);
}

// pi(a | s) proportional to y_sa; rows without mass fall back to uniform.
inline Mat policy_from_y(const MdpModel& mdp, const Vec& y) {
  const Eigen::Index SA = static_cast<Eigen::Index>(mdp.S) * mdp.A;
  if (y.size() != SA) throw DomainError("dual variable has the wrong size");
  Mat pi(mdp.S, mdp.A);
  for (int s = 0; s < mdp.S; ++s) {
    double tot = 0.0;
    for (int a = 0; a < mdp.A; ++a) tot += std::max(0.0, y[mdp.col(s, a)]);
    for (int a = 0; a < mdp.A; ++a)
      pi(s, a) = tot > 0.0 ? std::max(0.0, y[mdp.col(s, a)]) / tot : 1.0 / static_cast<double>(mdp.A);
  }
  return pi;
}

// Stationary distribution of the chain induced by pi.
inline Vec stationary_distribution(const MdpModel& mdp, const Mat& pi) {
  Mat Ppi = Mat::Zero(mdp.S, mdp.S);
  for (int a = 0; a < mdp.A; ++a) Ppi += pi.col(a).asDiagonal() * mdp.P[a];
  const Mat M = Ppi.transpose() - Mat::Identity(mdp.S, mdp.S);
  Eigen::FullPivLU<Mat> lu(M);
  lu.setThreshold(1e-10);
  if (lu.rank() != mdp.S - 1) throw DiagnosticError("induced chain has no unique stationary distribution");
  Mat Aug(mdp.S + 1, mdp.S);
  Aug << M, Mat::Ones(1, mdp.S);
  Vec rhs = Vec::Zero(mdp.S + 1);
  rhs[mdp.S] = 1.0;
  Vec d = Aug.colPivHouseholderQr().solve(rhs);
  return d;
}

inline double avg_reward(const Mat& pi, const MdpModel& mdp) {
  const Vec d = stationary_distribution(mdp, pi);
  double v = 0.0;
  for (int s = 0; s < mdp.S; ++s)
    for (int a = 0; a < mdp.A; ++a) v += d[s] * pi(s, a) * mdp.r(s, a);
  return v;
}

}  // namespace pbssp::problems
