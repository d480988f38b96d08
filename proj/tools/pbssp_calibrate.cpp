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

// Calibration helper for the desk presets. Runs the plain oracle, the RDE
// baseline and PB-SSP on one config and prints gap quantiles, so that the
// target epsilon (and the SPEG step size) can be picked where the plain
// oracle fails often.
//
//   pbssp_calibrate --config game_desk --reps 100 --eta 0.05,0.1,0.2

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbssp/bench/output.hpp"

using namespace pbssp;

namespace {

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(q * static_cast<double>(v.size() - 1) + 0.5);
  return v[k];
}

void report(const bench::ExperimentConfig& cfg, const std::vector<double>& eps_grid) {
  const bench::ExperimentResult r = bench::run_experiment(cfg);
  std::vector<double> gaps;
  for (const auto& rec : r.records) gaps.push_back(rec.completed ? rec.gap : 1e300);
  std::printf("%-14s eta=%-8s calls=%6.1f  q50=%.3e q70=%.3e q90=%.3e q99=%.3e max=%.3e\n",
              r.summary.procedure.c_str(),
              cfg.oracle.speg_eta ? std::to_string(*cfg.oracle.speg_eta).substr(0, 8).c_str() : "default",
              r.summary.calls, quantile(gaps, 0.5), quantile(gaps, 0.7), quantile(gaps, 0.9), quantile(gaps, 0.99),
              quantile(gaps, 1.0));
  for (double e : eps_grid) {
    const auto bad = std::count_if(gaps.begin(), gaps.end(), [e](double g) { return g > e; });
    std::printf("    P[gap > %.4g] = %.3f\n", e, static_cast<double>(bad) / static_cast<double>(gaps.size()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gap quantiles for plain, RDE and PB-SSP runs of one config"};
  std::string config;
  std::size_t reps = 100, parallel = 1, rde_m = 9;
  std::vector<double> etas, eps_grid;
  std::vector<int> Ts;
  app.add_option("--config", config, "config file or preset name")->required();
  app.add_option("--reps", reps, "replications per procedure");
  app.add_option("--parallel", parallel, "worker threads");
  app.add_option("--rde-m", rde_m, "trials of the RDE baseline");
  app.add_option("--eta", etas, "SPEG step sizes to scan")->delimiter(',');
  app.add_option("--T", Ts, "PB-SSP round counts to scan")->delimiter(',');
  app.add_option("--eps", eps_grid, "targets at which to print failure fractions")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  try {
    std::string path = config;
    const auto preset = std::filesystem::path(PBSSP_PRESET_DIR) / (config + ".cfg");
    if (!std::filesystem::exists(path) && std::filesystem::exists(preset)) path = preset.string();
    bench::ExperimentConfig base = bench::load_config(path);
    base.replications = reps;
    base.parallel = parallel;
    if (eps_grid.empty()) eps_grid.push_back(base.epsilon);
    std::vector<std::optional<double>> eta_list;
    for (double e : etas) eta_list.emplace_back(e);
    if (eta_list.empty()) eta_list.push_back(base.oracle.speg_eta);
    if (Ts.empty()) Ts.push_back(base.T.value_or(2));
    for (const auto& eta : eta_list) {
      for (bench::Procedure pr : {bench::Procedure::Plain, bench::Procedure::Rde}) {
        bench::ExperimentConfig c = base;
        c.oracle.speg_eta = eta;
        c.procedure = pr;
        if (pr == bench::Procedure::Rde) c.m = rde_m;
        report(c, eps_grid);
      }
      for (int T : Ts) {
        bench::ExperimentConfig c = base;
        c.oracle.speg_eta = eta;
        c.procedure = bench::Procedure::Pbssp;
        c.T = T;
        std::printf("T = %d\n", T);
        report(c, eps_grid);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
