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

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "pbssp/core/types.hpp"

namespace pbssp::bench {

inline constexpr int kSchemaVersion = 1;

// Flat "key = value" text, one pair per line; '#' starts a comment.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::istream& in, const std::string& origin = "<config>") {
    KeyValueFile f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw IoError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string val = trim(line.substr(eq + 1));
      if (key.empty()) throw IoError(origin + ":" + std::to_string(lineno) + ": empty key");
      if (!f.values_.emplace(key, val).second)
        throw IoError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    return f;
  }
  static KeyValueFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    return parse(in, path);
  }

  bool has(const std::string& k) const { return values_.count(k) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& k, const std::string& def) const {
    used_.insert(k);
    auto it = values_.find(k);
    return it == values_.end() ? def : it->second;
  }
  std::optional<std::string> opt_str(const std::string& k) const {
    used_.insert(k);
    auto it = values_.find(k);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  double real(const std::string& k, double def) const {
    auto s = opt_str(k);
    return s ? to_real(k, *s) : def;
  }
  std::optional<double> opt_real(const std::string& k) const {
    auto s = opt_str(k);
    if (!s) return std::nullopt;
    return to_real(k, *s);
  }
  std::int64_t integer(const std::string& k, std::int64_t def) const {
    auto s = opt_str(k);
    return s ? to_int<std::int64_t>(k, *s) : def;
  }
  std::optional<std::int64_t> opt_integer(const std::string& k) const {
    auto s = opt_str(k);
    if (!s) return std::nullopt;
    return to_int<std::int64_t>(k, *s);
  }
  std::uint64_t u64(const std::string& k, std::uint64_t def) const {
    auto s = opt_str(k);
    return s ? to_int<std::uint64_t>(k, *s) : def;
  }
  bool boolean(const std::string& k, bool def) const {
    auto s = opt_str(k);
    if (!s) return def;
    if (*s == "true" || *s == "1") return true;
    if (*s == "false" || *s == "0") return false;
    throw IoError("key '" + k + "': expected true or false, got '" + *s + "'");
  }

  // Keys present in the file that no accessor asked for.
  std::set<std::string> unused() const {
    std::set<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) out.insert(k);
    return out;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }
  static double to_real(const std::string& k, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size()) throw IoError("key '" + k + "': expected a number, got '" + s + "'");
    return v;
  }
  template <class I>
  static I to_int(const std::string& k, const std::string& s) {
    I v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw IoError("key '" + k + "': expected an integer, got '" + s + "'");
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

enum class ProblemKind { Quadratic, Mdp, Game };
enum class Procedure { Plain, Rde, Pbssp };
enum class OracleKind { Saa, Speg, Mogda };
enum class RunMode { Theory, Experiment };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Quadratic;
  std::uint64_t seed = 1;
  std::string regularization = "none";  // none | quadratic | entropy (MDP, game)
  // quadratic
  std::int64_t d_x = 20, d_y = 20;
  double mu = 1.0, L = 8.0, L_xy = 2.0, sigma = 1.0;
  bool heavy_tailed = false;
  std::optional<double> box_radius;
  // MDP
  int states = 10, actions = 4;
  double U_x = 0.5, reward_sigma = 1.0;
  // game
  std::int64_t N_x = 30, N_y = 50;
  double sigma_A = 1.0;
};

struct OracleSpec {
  OracleKind kind = OracleKind::Saa;
  std::size_t n = 1000;
  double inner_tol = 1e-9;
  std::size_t inner_max_iters = 2'000'000;
  std::size_t speg_iters = 500;
  std::size_t speg_batch = 10;
  std::optional<double> speg_eta;
  bool speg_warm_start = true;  // PB-SSP rounds restart SPEG from the previous round's output
  double mogda_initial_sq_dist = 1.0;
};

struct ExperimentConfig {
  std::string name = "custom";
  std::string description;
  ProblemSpec problem;
  Procedure procedure = Procedure::Pbssp;
  RunMode mode = RunMode::Experiment;
  OracleSpec oracle;
  double epsilon = 0.01;
  double p = 0.01;
  std::optional<double> nu;
  std::optional<int> T;
  std::optional<std::size_t> m;
  std::optional<std::size_t> gradient_batch;  // default: a tenth of one oracle call's samples
  double gradient_weight = 0.1;
  std::size_t replications = 200;
  std::uint64_t master_seed = 1;
  std::string output;
  std::string format = "csv";
  std::size_t parallel = 1;
  bool long_running = false;

  void validate() const {
    if (replications < 1) throw DomainError("replications must be >= 1");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    if (nu && !(*nu > 1.0)) throw DomainError("nu must exceed 1");
    if (T && *T < 0) throw DomainError("T must be nonnegative");
    if (m && *m < 1) throw DomainError("m must be positive");
    if (parallel < 1) throw DomainError("parallel must be >= 1");
    if (format != "csv" && format != "table") throw DomainError("format must be csv or table");
    if (oracle.n < 1) throw DomainError("oracle.n must be >= 1");
    if (oracle.speg_eta && !(*oracle.speg_eta > 0.0)) throw DomainError("speg.eta must be positive");
    if (!(gradient_weight >= 0.0)) throw DomainError("gradient_weight must be nonnegative");
    const auto& r = problem.regularization;
    if (r != "none" && r != "quadratic" && r != "entropy")
      throw DomainError("problem.regularization must be none, quadratic or entropy");
    if (mode == RunMode::Experiment && procedure == Procedure::Pbssp && (!nu || !T || !m))
      throw DomainError("experiment-mode pbssp needs nu, T and m");
    if (mode == RunMode::Experiment && procedure == Procedure::Rde && !m)
      throw DomainError("experiment-mode rde needs m");
  }
};

inline std::string to_string(Procedure p) {
  switch (p) {
    case Procedure::Plain: return "plain";
    case Procedure::Rde: return "rde";
    case Procedure::Pbssp: return "pbssp";
  }
  return "?";
}
inline std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::Saa: return "saa";
    case OracleKind::Speg: return "speg";
    case OracleKind::Mogda: return "mogda";
  }
  return "?";
}

inline Procedure parse_procedure(const std::string& s) {
  if (s == "plain") return Procedure::Plain;
  if (s == "rde") return Procedure::Rde;
  if (s == "pbssp") return Procedure::Pbssp;
  throw DomainError("unknown procedure '" + s + "' (plain, rde, pbssp)");
}

namespace detail {

inline ProblemKind parse_problem(const std::string& s) {
  if (s == "quadratic") return ProblemKind::Quadratic;
  if (s == "mdp") return ProblemKind::Mdp;
  if (s == "game") return ProblemKind::Game;
  throw DomainError("unknown problem.kind '" + s + "' (quadratic, mdp, game)");
}
inline OracleKind parse_oracle(const std::string& s) {
  if (s == "saa") return OracleKind::Saa;
  if (s == "speg") return OracleKind::Speg;
  if (s == "mogda") return OracleKind::Mogda;
  throw DomainError("unknown oracle.kind '" + s + "' (saa, speg, mogda)");
}
inline std::size_t to_size(std::int64_t v, const char* key) {
  if (v < 0) throw DomainError(std::string(key) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

}  // namespace detail

// Reads a configuration; unknown keys and a missing or different
// schema_version are errors.
inline ExperimentConfig config_from(const KeyValueFile& f) {
  const auto ver = f.opt_integer("schema_version");
  if (!ver) throw IoError("config lacks schema_version");
  if (*ver != kSchemaVersion)
    throw IoError("unsupported schema_version " + std::to_string(*ver) + " (expected " +
                  std::to_string(kSchemaVersion) + ")");
  ExperimentConfig c;
  c.name = f.str("name", c.name);
  c.description = f.str("description", "");
  c.long_running = f.boolean("long_running", false);

  ProblemSpec& p = c.problem;
  p.kind = detail::parse_problem(f.str("problem.kind", "quadratic"));
  p.seed = f.u64("problem.seed", p.seed);
  p.regularization = f.str("problem.regularization", p.regularization);
  p.d_x = f.integer("problem.d_x", p.d_x);
  p.d_y = f.integer("problem.d_y", p.d_y);
  p.mu = f.real("problem.mu", p.mu);
  p.L = f.real("problem.L", p.L);
  p.L_xy = f.real("problem.L_xy", p.L_xy);
  p.sigma = f.real("problem.sigma", p.sigma);
  p.heavy_tailed = f.boolean("problem.heavy_tailed", p.heavy_tailed);
  p.box_radius = f.opt_real("problem.box_radius");
  p.states = static_cast<int>(f.integer("problem.states", p.states));
  p.actions = static_cast<int>(f.integer("problem.actions", p.actions));
  p.U_x = f.real("problem.U_x", p.U_x);
  p.reward_sigma = f.real("problem.reward_sigma", p.reward_sigma);
  p.N_x = f.integer("problem.N_x", p.N_x);
  p.N_y = f.integer("problem.N_y", p.N_y);
  p.sigma_A = f.real("problem.sigma_A", p.sigma_A);

  c.procedure = parse_procedure(f.str("procedure", "pbssp"));
  const std::string mode = f.str("mode", "experiment");
  if (mode == "theory")
    c.mode = RunMode::Theory;
  else if (mode == "experiment")
    c.mode = RunMode::Experiment;
  else
    throw DomainError("mode must be theory or experiment");

  OracleSpec& o = c.oracle;
  o.kind = detail::parse_oracle(f.str("oracle.kind", "saa"));
  o.n = detail::to_size(f.integer("oracle.n", static_cast<std::int64_t>(o.n)), "oracle.n");
  o.inner_tol = f.real("oracle.inner_tol", o.inner_tol);
  o.inner_max_iters = detail::to_size(
      f.integer("oracle.inner_max_iters", static_cast<std::int64_t>(o.inner_max_iters)), "oracle.inner_max_iters");
  o.speg_iters = detail::to_size(f.integer("speg.iters", static_cast<std::int64_t>(o.speg_iters)), "speg.iters");
  o.speg_batch = detail::to_size(f.integer("speg.batch", static_cast<std::int64_t>(o.speg_batch)), "speg.batch");
  o.speg_eta = f.opt_real("speg.eta");
  o.speg_warm_start = f.boolean("speg.warm_start", o.speg_warm_start);
  o.mogda_initial_sq_dist = f.real("mogda.initial_sq_dist", o.mogda_initial_sq_dist);

  c.epsilon = f.real("epsilon", c.epsilon);
  c.p = f.real("p", c.p);
  c.nu = f.opt_real("nu");
  if (auto t = f.opt_integer("T")) c.T = static_cast<int>(*t);
  if (auto m = f.opt_integer("m")) c.m = detail::to_size(*m, "m");
  if (auto g = f.opt_integer("gradient_batch")) c.gradient_batch = detail::to_size(*g, "gradient_batch");
  c.gradient_weight = f.real("gradient_weight", c.gradient_weight);
  c.replications = detail::to_size(f.integer("replications", static_cast<std::int64_t>(c.replications)),
                                   "replications");
  c.master_seed = f.u64("master_seed", c.master_seed);
  c.output = f.str("output", "");
  c.format = f.str("format", c.format);
  c.parallel = detail::to_size(f.integer("parallel", static_cast<std::int64_t>(c.parallel)), "parallel");

  const auto extra = f.unused();
  if (!extra.empty()) throw IoError("unknown config key '" + *extra.begin() + "'");
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::string& path) { return config_from(KeyValueFile::load(path)); }

inline ExperimentConfig parse_config(const std::string& text) {
  std::istringstream in(text);
  return config_from(KeyValueFile::parse(in));
}

}  // namespace pbssp::bench
