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

#ifndef QGENX_BENCH_HPP
#define QGENX_BENCH_HPP

#include <string>

#include "qgenx/ratefit.hpp"
#include "qgenx/simnet.hpp"

namespace qgenx {

struct ExperimentConfig {
  SimConfig sim;
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string csv_path = "runs.csv";
  std::string summary_path = "summary.json";
  double tradeoff_epsilon = 0.0;  // 0 disables the projection
};

// Parses the documented TOML schema; unknown keys and malformed values are
// reported with the offending field name. Empty checkpoints default to the
// geometric grid 10^2, 10^2.5, ... capped at T.
ExperimentConfig load_experiment_config(const std::string& toml_path);

std::vector<long> default_checkpoints(long iterations);

struct ExperimentSummary {
  std::vector<long> checkpoints;
  std::vector<double> median_gaps;
  RateFit rate;
  double eps_q_bar = 0.0;
  double bits_bound_per_iteration = 0.0;  // per worker, bound-derived
  long variance_bound_violations = 0;
  long code_sandwich_violations = 0;
  long total_bits_median = 0;
  double median_final_gap = 0.0;
  int clip_events_total = 0;
};

// Runs every seed, writes one CSV row per (seed, iteration) plus a JSON
// summary with median gaps, the rate fit, and bound-violation counters.
ExperimentSummary run_experiment(const ExperimentConfig& config);

// CSV column set is stable; tests pin it.
extern const char* const kCsvHeader;

double median(std::vector<double> values);

}  // namespace qgenx

#endif  // QGENX_BENCH_HPP
