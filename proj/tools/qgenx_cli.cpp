// Copyright 2026 The QGenX Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "qgenx/bench.hpp"
#include "qgenx/golden.hpp"
#include "qgenx/quantizer.hpp"

namespace {

int cmd_run(const std::string& config_path) {
  const qgenx::ExperimentConfig config =
      qgenx::load_experiment_config(config_path);
  const qgenx::ExperimentSummary summary = qgenx::run_experiment(config);
  std::cout << "wrote " << config.csv_path << " and " << config.summary_path
            << "\n";
  std::cout << "median final gap: " << summary.median_final_gap << "\n";
  std::cout << "rate fit: slope " << summary.rate.slope << ", r^2 "
            << summary.rate.r_squared << "\n";
  std::cout << "bound violations: variance "
            << summary.variance_bound_violations << ", code sandwich "
            << summary.code_sandwich_violations << "\n";
  if (summary.variance_bound_violations + summary.code_sandwich_violations > 0) {
    std::cerr << "error: bound violations detected\n";
    return 1;
  }
  return 0;
}

// Reads a CSV produced by `run`, takes the median gap per checkpoint across
// seeds and fits the log-log slope.
int cmd_fit(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) {
    std::cerr << "error: cannot read " << csv_path << "\n";
    return 1;
  }
  std::string line;
  if (!std::getline(in, line) || line != qgenx::kCsvHeader) {
    std::cerr << "error: unrecognized CSV header\n";
    return 1;
  }
  std::map<long, std::vector<double>> gaps_at;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string field;
    std::getline(row, field, ',');  // seed
    std::getline(row, field, ',');
    const long t = std::stol(field);
    std::getline(row, field, ',');  // gap, empty off-checkpoint
    if (!field.empty()) gaps_at[t].push_back(std::stod(field));
  }
  if (gaps_at.size() < 3) {
    std::cerr << "error: need gaps at >= 3 checkpoints\n";
    return 1;
  }
  std::vector<double> ts, gs;
  for (auto& [t, gaps] : gaps_at) {
    ts.push_back(static_cast<double>(t));
    gs.push_back(qgenx::median(gaps));
  }
  const qgenx::RateFit fit = qgenx::fit_rate(ts, gs);
  std::cout << "slope " << fit.slope << "\nintercept " << fit.intercept
            << "\nr_squared " << fit.r_squared << "\n";
  if (fit.clamped > 0)
    std::cout << "note: " << fit.clamped << " gap(s) clamped at the 1e-14 floor\n";
  return 0;
}

int cmd_golden(const std::string& file, bool emit) {
  if (emit) {
    qgenx::emit_golden_file(file);
    std::cout << "wrote " << file << "\n";
    return 0;
  }
  const qgenx::GoldenReport report = qgenx::verify_golden_file(file);
  std::cout << report.checked << " fixtures checked\n";
  for (const std::string& m : report.mismatches)
    std::cerr << "mismatch: " << m << "\n";
  return report.ok() ? 0 : 1;
}

// Prints the variance and code-length bounds for the schedule a config
// would start from (uniform levels, uniform coordinate distribution).
int cmd_bounds(const std::string& config_path) {
  const qgenx::ExperimentConfig config =
      qgenx::load_experiment_config(config_path);
  const qgenx::Problem problem = qgenx::make_problem(config.sim.problem);
  const int d = problem.op.dim();
  const qgenx::LevelSchedule schedule =
      qgenx::LevelSchedule::uniform(config.sim.levels, config.sim.norm);
  const qgenx::VarianceBoundReport vb = qgenx::variance_bound(schedule, d);
  std::cout << "d = " << d << ", s = " << config.sim.levels << "\n";
  std::cout << "eps_Q = " << vb.eps_q << " ("
            << (vb.small_dim_regime ? "small-d" : "large-d")
            << " regime, d_th = " << vb.dim_threshold << ")\n";
  std::cout << "max level ratio = " << vb.max_level_ratio
            << ", p* = " << vb.p_star << ", K_p = " << vb.k_p << "\n";
  const qgenx::CoordinateCDF uniform = qgenx::CoordinateCDF::uniform();
  const Eigen::VectorXd weights = qgenx::level_weights(uniform, schedule);
  const qgenx::CodeLengthStats stats = qgenx::code_length_stats(weights, d);
  std::cout << "uniform-CDF weights: entropy " << stats.entropy_bits
            << " bits/symbol, N_Q = " << stats.bound_bits
            << " bits/message\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Q-GenX benchmark toolkit"};
  app.require_subcommand(1);

  std::string config_path, csv_path, golden_file;
  bool golden_emit = false;

  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "TOML config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* fit = app.add_subcommand("fit", "fit a rate to a metrics CSV");
  fit->add_option("csv", csv_path, "CSV produced by `run`")
      ->required()
      ->check(CLI::ExistingFile);

  CLI::App* golden =
      app.add_subcommand("golden", "emit or verify codec/wire golden vectors");
  golden->add_option("file", golden_file, "golden JSON file")->required();
  golden->add_flag("--emit", golden_emit, "write fixtures instead of verifying");

  CLI::App* bounds = app.add_subcommand(
      "bounds", "print eps_Q and N_Q for the configured schedule");
  bounds->add_option("config", config_path, "TOML config file")
      ->required()
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (fit->parsed()) return cmd_fit(csv_path);
    if (golden->parsed()) return cmd_golden(golden_file, golden_emit);
    if (bounds->parsed()) return cmd_bounds(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
