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

#ifndef QGENX_SIMNET_HPP
#define QGENX_SIMNET_HPP

#include <optional>

#include "qgenx/cdf.hpp"
#include "qgenx/problems.hpp"
#include "qgenx/solver.hpp"
#include "qgenx/wire.hpp"

namespace qgenx {

// One synchronous K-worker experiment: per-round oracle queries, quantize ->
// encode -> broadcast -> decode -> aggregate, optional level-update epochs.
struct SimConfig {
  ProblemSpec problem = BilinearSkewSpec{};
  NoiseModel noise = std::monostate{};
  int workers = 1;
  long iterations = 100;
  Variant variant = Variant::de;
  CodingScheme scheme = CodingScheme::huffman;
  int levels = 3;  // s
  NormOrder norm = NormOrder::l2;
  std::vector<long> update_steps;
  std::vector<long> checkpoints;
  double domain_radius = 2.0;
  std::optional<Vec> domain_center;  // defaults to the problem solution
  int stats_window = 64;
  int cdf_bins = 1024;
  CdfModel cdf_model = CdfModel::empirical;
  LevelOptMethod level_method = LevelOptMethod::coordinate;
};

struct RoundMetrics {
  long t = 0;
  std::vector<long> bits_per_worker;  // both phases, content bits
  std::optional<double> gap;          // ergodic-average gap at checkpoints
  double quant_err_sq_mean = 0.0;     // mean ||decoded - v||^2 this round
  int clip_events = 0;
  int schedule_version = 0;
};

// Contiguous iterations sharing one schedule; feeds the epsilon_Q-bar and
// expected-bits accounting.
struct ScheduleSegment {
  int version = 0;
  long from_iteration = 1;
  double eps_q = 0.0;
  Eigen::VectorXd weights;   // declared symbol weights for this segment
  double bound_bits = 0.0;   // code-length bound at the problem dimension
};

struct SimResult {
  Trajectory trajectory;
  std::vector<RoundMetrics> metrics;
  std::vector<ScheduleSegment> segments;
  Vec ergodic;
  double final_gap = 0.0;
  long total_bits = 0;  // all workers, both phases
  TestDomain domain;
  long variance_bound_violations = 0;
  long code_sandwich_violations = 0;
  int clip_events_total = 0;
};

SimResult run(const SimConfig& config, uint64_t seed);

}  // namespace qgenx

#endif  // QGENX_SIMNET_HPP
