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
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pbssp/bench/config.hpp"
#include "pbssp/boosting/boost.hpp"
#include "pbssp/boosting/rde.hpp"
#include "pbssp/core/gap.hpp"
#include "pbssp/oracles/saa.hpp"
#include "pbssp/oracles/speg.hpp"
#include "pbssp/problems/matrix_game.hpp"
#include "pbssp/problems/mdp.hpp"
#include "pbssp/problems/quadratic.hpp"

namespace pbssp::bench {

// The problem as scored (original) and as optimized (regularized surrogate;
// the same problem when no regularization is configured).
struct ProblemPair {
  SspProblem original;
  SspProblem surrogate;
};

inline problems::Regularization regularization_of(const ProblemSpec& p) {
  if (p.regularization == "quadratic") return problems::Regularization::Quadratic;
  if (p.regularization == "entropy") return problems::Regularization::Entropy;
  return problems::Regularization::None;
}

inline ProblemPair build_problems(const ExperimentConfig& cfg) {
  const ProblemSpec& p = cfg.problem;
  const problems::Regularization reg = regularization_of(p);
  switch (p.kind) {
    case ProblemKind::Quadratic: {
      if (reg != problems::Regularization::None)
        throw CapabilityError("the quadratic benchmark is already strongly convex-concave; use regularization = none");
      problems::QuadraticSpec s;
      s.d_x = p.d_x;
      s.d_y = p.d_y;
      s.mu = p.mu;
      s.L = p.L;
      s.L_xy = p.L_xy;
      s.sigma = p.sigma;
      s.heavy_tailed = p.heavy_tailed;
      s.seed = p.seed;
      s.box_radius = p.box_radius;
      SspProblem q = problems::make_quadratic_instance(s).problem;
      return {q, q};
    }
    case ProblemKind::Mdp: {
      const problems::MdpModel mdp = problems::make_random_mdp(p.states, p.actions, p.seed, p.U_x, p.reward_sigma);
      return {problems::make_mdp_ssp(mdp), problems::make_mdp_ssp(mdp, reg, cfg.epsilon)};
    }
    case ProblemKind::Game: {
      problems::MatrixGame g = problems::make_matrix_game_instance(p.N_x, p.N_y, p.sigma_A, p.seed);
      return {g.problem, problems::make_matrix_game(p.N_x, p.N_y, p.sigma_A, p.seed, reg, cfg.epsilon)};
    }
  }
  throw DomainError("unknown problem kind");
}

struct RunRecord {
  std::size_t replication = 0;
  std::uint64_t seed = 0;  // replication seed
  double calls = 0.0;      // oracle calls + gradient_weight * gradient calls
  Accounting cost;
  double gap = 0.0;
  bool success = false;
  bool completed = false;
  std::string error;
};

struct Summary {
  std::string procedure;  // e.g. "SAA+PB-SSP"
  std::optional<double> nu;
  std::optional<int> T;
  std::optional<std::size_t> m;
  double calls = 0.0;    // mean over completed replications
  double mean_gap = 0.0;  // mean over completed replications
  double fail_prob = 0.0;  // records with success = false over R
  double samples = 0.0;   // mean samples per completed replication
  std::uint64_t seed = 0;  // master seed
  std::size_t replications = 0;
  std::size_t completed = 0;
  std::size_t failures = 0;
  double fail_lo = 0.0, fail_hi = 0.0;  // Wilson 95% interval
  bool incomplete() const { return completed < replications; }
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // sorted by replication index
  Summary summary;
};

// Wilson score interval for k successes in n trials.
inline std::pair<double, double> wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n), ph = static_cast<double>(k) / nn, z2 = z * z;
  const double den = 1.0 + z2 / nn;
  const double mid = (ph + z2 / (2.0 * nn)) / den;
  const double half = z * std::sqrt(ph * (1.0 - ph) / nn + z2 / (4.0 * nn * nn)) / den;
  return {k == 0 ? 0.0 : std::max(0.0, mid - half), k == n ? 1.0 : std::min(1.0, mid + half)};
}

inline std::string procedure_label(const ExperimentConfig& cfg) {
  std::string base = cfg.oracle.kind == OracleKind::Saa ? "SAA" : cfg.oracle.kind == OracleKind::Speg ? "SPEG" : "MOGDA";
  switch (cfg.procedure) {
    case Procedure::Plain: return base;
    case Procedure::Rde: return base + "+RDE";
    case Procedure::Pbssp: return base + "+PB-SSP";
  }
  return base;
}

// Samples behind one oracle call, used for the default gradient batch.
inline std::size_t samples_per_call(const OracleSpec& o) {
  if (o.kind == OracleKind::Speg) return 2 * o.speg_iters * o.speg_batch;
  return o.n;
}

inline std::size_t gradient_batch_of(const ExperimentConfig& cfg) {
  if (cfg.gradient_batch) return std::max<std::size_t>(1, *cfg.gradient_batch);
  return std::max<std::size_t>(1, samples_per_call(cfg.oracle) / 10);
}

inline oracles::SaaOptions saa_options(const OracleSpec& o) {
  oracles::SaaOptions s;
  s.inner_tol = o.inner_tol;
  s.inner_max_iters = o.inner_max_iters;
  return s;
}

inline oracles::SpegOptions speg_options(const OracleSpec& o) {
  oracles::SpegOptions s;
  s.iters = o.speg_iters;
  s.batch = o.speg_batch;
  s.eta = o.speg_eta;
  return s;
}

inline CandidateOracle make_oracle(const OracleSpec& o) {
  switch (o.kind) {
    case OracleKind::Saa: return oracles::saa_oracle(o.n, saa_options(o));
    case OracleKind::Speg: return oracles::speg_oracle(speg_options(o));
    case OracleKind::Mogda:
      throw CapabilityError("the MOGDA oracle runs in theory mode only (its length follows the accuracy target)");
  }
  throw DomainError("unknown oracle kind");
}

inline boosting::Mode mode_of(const SspProblem& p) {
  return p.constrained() ? boosting::Mode::Constrained : boosting::Mode::Unconstrained;
}

// One replication on the surrogate; returns the point and its cost.
inline OracleCall run_procedure(const ExperimentConfig& cfg, const SspProblem& problem, Rng& rng) {
  const boosting::Mode mode = mode_of(problem);
  const bool theory = cfg.mode == RunMode::Theory;
  if (cfg.procedure == Procedure::Plain) {
    if (cfg.oracle.kind == OracleKind::Mogda) throw CapabilityError("plain MOGDA is not supported");
    return make_oracle(cfg.oracle)(problem, rng);
  }
  if (cfg.procedure == Procedure::Rde) {
    if (theory) {
      if (cfg.oracle.kind != OracleKind::Saa) throw CapabilityError("theory-mode RDE uses the SAA oracle");
      boosting::RdeResult r = boosting::rde_baseline(problem, cfg.epsilon, cfg.p, mode, rng, saa_options(cfg.oracle));
      return {std::move(r.z), r.cost};
    }
    const CandidateOracle oracle = make_oracle(cfg.oracle);
    if (mode == boosting::Mode::Unconstrained) {
      boosting::RdeResult r = boosting::rde_distance(problem, oracle, *cfg.m, rng);
      return {std::move(r.z), r.cost};
    }
    const auto batch = robust::GradientBatch::of_size(gradient_batch_of(cfg));
    boosting::RdeResult r = boosting::rde_function_gap(problem, oracle, boosting::make_odd(*cfg.m), batch, batch, rng);
    return {std::move(r.z), r.cost};
  }
  // PB-SSP
  if (theory) {
    boosting::PlanOverrides ov;
    ov.nu = cfg.nu;
    ov.T = cfg.T;
    ov.m = cfg.m;
    const boosting::PbsspPlan plan =
        boosting::plan_geometric(problem.constants(), cfg.epsilon, cfg.p, mode, cfg.nu.value_or(2.0), ov);
    boosting::PbsspResult r;
    if (cfg.oracle.kind == OracleKind::Mogda) {
      boosting::MogdaBoostOptions mo;
      mo.initial_sq_dist = cfg.oracle.mogda_initial_sq_dist;
      const PrimalDualPair z0(problem.domain_x().center(), problem.domain_y().center());
      r = boosting::boost_mogda(problem, plan, z0, rng, mo);
    } else if (cfg.oracle.kind == OracleKind::Saa) {
      r = mode == boosting::Mode::Unconstrained ? boosting::boost_saa(problem, plan, rng, saa_options(cfg.oracle))
                                                : boosting::boost_saa_c(problem, plan, rng, saa_options(cfg.oracle));
    } else {
      throw CapabilityError("theory-mode PB-SSP uses the SAA or MOGDA oracle");
    }
    return {std::move(r.z), r.cost};
  }
  const boosting::PbsspPlan plan =
      boosting::plan_experiment(problem.constants(), cfg.epsilon, cfg.p, mode, *cfg.nu, *cfg.T, *cfg.m);
  boosting::OracleFactory make = [oracle = make_oracle(cfg.oracle)](const boosting::RoundContext&) { return oracle; };
  if (cfg.oracle.kind == OracleKind::Speg && cfg.oracle.speg_warm_start)
    make = [opt = speg_options(cfg.oracle)](const boosting::RoundContext& ctx) {
      return oracles::speg_oracle(opt, ctx.warm_start);
    };
  boosting::PbsspResult r = boosting::boost_with_factory(problem, plan, make, gradient_batch_of(cfg), rng);
  return {std::move(r.z), r.cost};
}

inline RunRecord run_replication(const ExperimentConfig& cfg, const ProblemPair& pp, std::size_t rep) {
  RunRecord rec;
  rec.replication = rep;
  rec.seed = ::pbssp::detail::splitmix64(cfg.master_seed ^ ::pbssp::detail::splitmix64(rep));
  try {
    Rng rng = make_stream(cfg.master_seed, rep);
    const OracleCall call = run_procedure(cfg, pp.surrogate, rng);
    rec.cost = call.cost;
    rec.calls = call.cost.weighted_calls(cfg.gradient_weight);
    rec.gap = eval_gap(pp.original, call.z).gap;
    rec.success = rec.gap <= cfg.epsilon;
    rec.completed = true;
  } catch (const std::exception& e) {
    rec.error = e.what();
    rec.success = false;
    rec.completed = false;
  }
  return rec;
}

// `constrained` selects the odd trial count used by constrained procedures.
inline Summary summarize(const ExperimentConfig& cfg, const std::vector<RunRecord>& records, bool constrained) {
  Summary s;
  s.procedure = procedure_label(cfg);
  if (cfg.procedure == Procedure::Pbssp) {
    s.nu = cfg.nu;
    s.T = cfg.T;
  }
  if (cfg.procedure != Procedure::Plain) {
    s.m = cfg.m;
    if (s.m && constrained) s.m = boosting::make_odd(*s.m);
  }
  s.seed = cfg.master_seed;
  s.replications = records.size();
  double calls = 0.0, gap = 0.0, samples = 0.0;
  for (const RunRecord& r : records) {
    if (!r.success) ++s.failures;
    if (!r.completed) continue;
    ++s.completed;
    calls += r.calls;
    gap += r.gap;
    samples += static_cast<double>(r.cost.samples);
  }
  if (s.completed > 0) {
    const double c = static_cast<double>(s.completed);
    s.calls = calls / c;
    s.mean_gap = gap / c;
    s.samples = samples / c;
  }
  s.fail_prob = s.replications ? static_cast<double>(s.failures) / static_cast<double>(s.replications) : 0.0;
  std::tie(s.fail_lo, s.fail_hi) = wilson_interval(s.failures, s.replications);
  return s;
}

// Replications run on up to cfg.parallel threads; replication j always uses
// stream j of the master seed, so results do not depend on scheduling.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const ProblemPair pp = build_problems(cfg);
  std::vector<RunRecord> records(cfg.replications);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < cfg.replications; j = next++) records[j] = run_replication(cfg, pp, j);
  };
  const std::size_t nt = std::min(cfg.parallel, cfg.replications);
  if (nt <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  ExperimentResult out;
  out.summary = summarize(cfg, records, pp.surrogate.constrained());
  out.records = std::move(records);
  return out;
}

}  // namespace pbssp::bench
