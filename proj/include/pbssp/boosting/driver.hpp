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

#include <functional>
#include <optional>
#include <vector>

#include "pbssp/boosting/plan.hpp"
#include "pbssp/core/problem.hpp"
#include "pbssp/robust/robust.hpp"

namespace pbssp::boosting {

// What a round oracle sees: round i in 0..T+1, the stream (X: Phi_x^{i-1},
// Y: Phi_y^{i-1}) and the perturbed problem of that stream.
struct RoundContext {
  int round = 0;
  Block block = Block::X;
  const PerturbedProblem* sub = nullptr;
  const PbsspPlan* plan = nullptr;
  double lambda = 0.0;
  double radius = 0.0;  // distance target eps^i; 0 in the final round
  std::optional<PrimalDualPair> warm_start;

  bool final_round() const { return round == plan->T + 1; }
  const SspProblem& problem() const { return sub->problem; }
};

using RoundOracle = std::function<OracleCall(const RoundContext&, Rng&)>;

struct RoundTelemetry {
  int round = 0;
  Block block = Block::X;
  double lambda = 0.0;
  double radius = 0.0;
  Accounting cost;
  Vec center;                      // x_i^c (X stream) or y_i^c (Y stream)
  PrimalDualPair pair;             // full pair returned by the oracle
  std::optional<Vec> target;       // x_i^* or y_i^*, when the perturbed saddle is computable
  std::optional<double> achieved;  // |center - target|
};

struct PbsspResult {
  PrimalDualPair z;
  Accounting cost;
  std::vector<RoundTelemetry> telemetry;

  const RoundTelemetry& at(int round, Block b) const {
    for (const auto& t : telemetry)
      if (t.round == round && t.block == b) return t;
    throw DomainError("no telemetry for the requested round");
  }
};

struct DriverOptions {
  std::optional<ProxKind> prox_x;  // default: KL on entropic simplex blocks, quadratic otherwise
  std::optional<ProxKind> prox_y;
  std::optional<PrimalDualPair> z0;  // warm start of round 0 for both streams
};

inline ProxKind default_prox_kind(const SspProblem& problem, Block b) {
  const BlockTerms& h = b == Block::X ? problem.mean().hx : problem.mean().hy;
  const Domain& d = b == Block::X ? problem.domain_x() : problem.domain_y();
  return h.entropic() && d.kind() == Domain::Kind::Simplex ? ProxKind::KL : ProxKind::Quadratic;
}

// Rounds 0..T run `round_oracle` on Phi_x^{i-1}, Phi_y^{i-1} and keep the
// block of the stream; round T + 1 runs `final_oracle`. Each (round, stream)
// pair draws from its own RNG stream.
inline PbsspResult pb_ssp_generic(const SspProblem& problem, const PbsspPlan& plan, const RoundOracle& round_oracle,
                                  const RoundOracle& final_oracle, Rng& rng, const DriverOptions& opt = {}) {
  plan.validate();
  const ProxKind kx = opt.prox_x.value_or(default_prox_kind(problem, Block::X));
  const ProxKind ky = opt.prox_y.value_or(default_prox_kind(problem, Block::Y));
  const std::uint64_t base = rng();

  PbsspResult out;
  std::optional<Vec> cx, cy;
  std::optional<PrimalDualPair> warm_x = opt.z0, warm_y = opt.z0;
  for (int i = 0; i <= plan.T + 1; ++i) {
    std::optional<Vec> next_x, next_y;
    for (Block b : {Block::X, Block::Y}) {
      const bool bx = b == Block::X;
      const double lam = bx ? plan.lam_x(i - 1) : plan.lam_y(i - 1);
      // Round 0 has lambda^{-1} = 0, so its (absent) center plays no role.
      const PerturbedProblem sub = bx ? perturb(problem, lam, i == 0 ? std::nullopt : cx, 0.0, std::nullopt, ky, kx)
                                      : perturb(problem, 0.0, std::nullopt, lam, i == 0 ? std::nullopt : cy, ky, kx);
      RoundContext ctx;
      ctx.round = i;
      ctx.block = b;
      ctx.sub = &sub;
      ctx.plan = &plan;
      ctx.lambda = lam;
      ctx.radius = i <= plan.T ? (bx ? plan.radius_x : plan.radius_y)[static_cast<std::size_t>(i)] : 0.0;
      ctx.warm_start = bx ? warm_x : warm_y;

      Rng r = make_stream(base, 2 * static_cast<std::uint64_t>(i) + (bx ? 0 : 1));
      OracleCall call = ctx.final_round() ? final_oracle(ctx, r) : round_oracle(ctx, r);
      out.cost += call.cost;

      RoundTelemetry t;
      t.round = i;
      t.block = b;
      t.lambda = lam;
      t.radius = ctx.radius;
      t.cost = call.cost;
      t.center = bx ? call.z.x : call.z.y;
      t.pair = call.z;
      if (const auto& s = sub.problem.saddle()) {
        t.target = bx ? s->x : s->y;
        t.achieved = (t.center - *t.target).norm();
      }
      (bx ? next_x : next_y) = t.center;
      (bx ? warm_x : warm_y) = call.z;
      out.telemetry.push_back(std::move(t));
    }
    cx = std::move(next_x);
    cy = std::move(next_y);
  }
  out.z = PrimalDualPair(*cx, *cy);
  return out;
}

// Both sides of the inexact proximal point estimate for one stream:
//   f(x_{T+1}^c) - f(x*) <= f^T(x_{T+1}^c) - f^T(x_{T+1}^*) + sum_{i<=T} lambda^i/2 |x_i^c - x_i^*|^2
// (and the mirrored statement for g). Needs the perturbed saddles.
struct ProximalLedger {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return rhs - lhs; }
};

inline ProximalLedger proximal_ledger(const SspProblem& problem, const PbsspPlan& plan, const PbsspResult& res,
                                      Block b) {
  if (!problem.saddle()) throw CapabilityError("proximal ledger needs the saddle point");
  const bool bx = b == Block::X;
  const double v = *problem.saddle_value();
  // Primal f for X, negated dual -g for Y, so both read as minimization.
  auto F = [&](const Vec& u) { return bx ? problem.inner_max(u) : -problem.inner_min(u); };
  const int T = plan.T;
  const RoundTelemetry& last = res.at(T + 1, b);
  const RoundTelemetry& prev = res.at(T, b);
  if (!last.target) throw CapabilityError("proximal ledger needs the perturbed saddles");
  const double lamT = bx ? plan.lam_x(T) : plan.lam_y(T);
  auto FT = [&](const Vec& u) { return F(u) + 0.5 * lamT * (u - prev.center).squaredNorm(); };

  ProximalLedger l;
  l.lhs = F(last.center) - (bx ? v : -v);
  l.rhs = FT(last.center) - FT(*last.target);
  for (int i = 0; i <= T; ++i) {
    const RoundTelemetry& t = res.at(i, b);
    if (!t.target) throw CapabilityError("proximal ledger needs the perturbed saddles");
    l.rhs += 0.5 * (bx ? plan.lam_x(i) : plan.lam_y(i)) * (t.center - *t.target).squaredNorm();
  }
  return l;
}

}  // namespace pbssp::boosting
