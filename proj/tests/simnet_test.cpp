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

#include "qgenx/simnet.hpp"

#include <cmath>

#include "doctest.h"
#include "qgenx/quantizer.hpp"

using namespace qgenx;

namespace {

SimConfig base_config() {
  SimConfig config;
  BilinearSkewSpec spec;
  spec.d = 2;
  spec.seed = 7;
  config.problem = spec;
  config.workers = 1;
  config.iterations = 50;
  config.variant = Variant::de;
  config.scheme = CodingScheme::fp32;
  config.levels = 3;
  config.checkpoints = {50};
  return config;
}

double f32(double x) { return static_cast<double>(static_cast<float>(x)); }

}  // namespace

TEST_CASE("fp32 passthrough run is transparent over a direct solver drive") {
  SimConfig config = base_config();
  const SimResult sim = run(config, /*seed=*/3);

  // Replay the same schedule by hand: oracle draws use the same keyed
  // streams, the wire rounds every coordinate to binary32.
  const Problem problem = make_problem(config.problem, config.noise);
  SolverState state(2, 1, Variant::de);
  for (long t = 1; t <= config.iterations; ++t) {
    RngStream full = RngStream::keyed(3, 0, t, RngPhase::kOracleFull);
    Vec v = problem.oracle.evaluate(state.x(), full).g;
    for (int i = 0; i < v.size(); ++i) v[i] = f32(v[i]);
    const Vec x_half = state.begin_step({v});
    RngStream half = RngStream::keyed(3, 0, t, RngPhase::kOracleHalf);
    Vec vh = problem.oracle.evaluate(x_half, half).g;
    for (int i = 0; i < vh.size(); ++i) vh[i] = f32(vh[i]);
    state.finish_step({vh});
    const Vec& recorded = sim.trajectory.half_iterates[t - 1];
    CHECK((recorded - state.x_half()).norm() == 0.0);
  }
}

TEST_CASE("fp32 passthrough message costs 200 bits at d = 4") {
  SimConfig config = base_config();
  BilinearSkewSpec spec;
  spec.d = 4;
  spec.seed = 1;
  config.problem = spec;
  config.workers = 2;
  config.iterations = 3;
  config.checkpoints = {3};
  const SimResult res = run(config, 0);
  for (const RoundMetrics& rm : res.metrics)
    for (long bits : rm.bits_per_worker)
      CHECK(bits == 2 * 200);  // both phases of the extrapolation variant
}

TEST_CASE("runs are deterministic in config and seed") {
  SimConfig config = base_config();
  config.scheme = CodingScheme::huffman;
  config.noise = AbsoluteNoise{0.3, 50.0};
  config.update_steps = {10, 30};
  const SimResult a = run(config, 11);
  const SimResult b = run(config, 11);
  REQUIRE(a.metrics.size() == b.metrics.size());
  CHECK(a.total_bits == b.total_bits);
  CHECK(a.final_gap == b.final_gap);
  for (size_t i = 0; i < a.metrics.size(); ++i) {
    CHECK(a.metrics[i].bits_per_worker == b.metrics[i].bits_per_worker);
    CHECK(a.metrics[i].quant_err_sq_mean == b.metrics[i].quant_err_sq_mean);
    CHECK(a.metrics[i].schedule_version == b.metrics[i].schedule_version);
  }
  const SimResult c = run(config, 12);
  CHECK(c.final_gap != a.final_gap);
}

TEST_CASE("dual averaging and optimistic variants send one message per round") {
  SimConfig config = base_config();
  config.scheme = CodingScheme::huffman;
  config.iterations = 10;
  config.checkpoints = {10};

  config.variant = Variant::da;
  const SimResult da = run(config, 2);
  config.variant = Variant::optda;
  const SimResult optda = run(config, 2);
  config.variant = Variant::de;
  const SimResult de = run(config, 2);

  // One broadcast per worker per round versus two for extrapolation.
  for (const SimResult* res : {&da, &optda}) {
    for (size_t i = 0; i < res->metrics.size(); ++i) {
      CHECK(res->metrics[i].bits_per_worker[0] > 0);
      CHECK(res->metrics[i].bits_per_worker[0] <
            de.metrics[i].bits_per_worker[0]);
    }
  }
}

TEST_CASE("level updates bump the schedule version everywhere at once") {
  SimConfig config = base_config();
  config.scheme = CodingScheme::huffman;
  config.workers = 3;
  config.noise = AbsoluteNoise{0.2, 50.0};
  config.iterations = 40;
  config.update_steps = {8, 24};
  config.checkpoints = {40};
  config.levels = 3;
  const SimResult res = run(config, 5);
  CHECK(res.metrics.front().schedule_version == 0);
  CHECK(res.metrics[6].schedule_version == 0);  // t = 7, before the update
  CHECK(res.metrics[7].schedule_version == 1);  // t = 8 updates at round start
  CHECK(res.metrics.back().schedule_version == res.segments.back().version);
  CHECK(res.segments.size() == 3);
  CHECK(res.segments[1].from_iteration == 8);
  CHECK(res.segments[2].from_iteration == 24);
  // Decoding succeeded for the whole run (hash agreement by construction)
  // and the bound bookkeeping stayed clean.
  CHECK(res.variance_bound_violations == 0);
  CHECK(res.code_sandwich_violations == 0);
}

TEST_CASE("averaging K independent absolute-noise oracles divides variance") {
  // Aggregated dual vector at a fixed point over many rounds: K = 3 i.i.d.
  // oracles through the wire should show variance sigma^2 / 3 within three
  // standard errors.
  const int k_workers = 3;
  const double sigma = 0.8;
  DiagonalMonotoneSpec spec;
  spec.d = 2;
  spec.seed = 9;
  const Problem problem = make_problem(spec, AbsoluteNoise{sigma, 1e6});
  const Vec x = Vec::Constant(2, 0.4);
  const Vec mean_target = problem.op(x);

  const int rounds = 10000;
  double acc = 0.0, acc_sq = 0.0;
  for (int t = 1; t <= rounds; ++t) {
    Vec aggregate = Vec::Zero(2);
    for (int k = 0; k < k_workers; ++k) {
      RngStream rng = RngStream::keyed(77, k, t, RngPhase::kOracleFull);
      const Vec g = problem.oracle.evaluate(x, rng).g;
      const SerializedMessage msg = serialize_fp32_message(g, 0);
      const WireMessage parsed =
          parse_message(msg.bytes, CodingScheme::fp32, 0, nullptr);
      for (int i = 0; i < 2; ++i) aggregate[i] += static_cast<double>(parsed.raw[i]);
    }
    aggregate /= k_workers;
    const double err = (aggregate - mean_target).squaredNorm();
    acc += err;
    acc_sq += err * err;
  }
  const double mean_err = acc / rounds;
  const double se =
      std::sqrt((acc_sq / rounds - mean_err * mean_err) / rounds);
  CHECK(std::abs(mean_err - sigma * sigma / k_workers) <= 3.0 * se);
}

TEST_CASE("aggregation of quantized duals stays unbiased") {
  const int k_workers = 4;
  const LevelSchedule sched = LevelSchedule::uniform(3, NormOrder::l2);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(5, 0.2);
  const Codebook book = Codebook::huffman(w);
  Vec v(3);
  v << 0.9, -0.4, 0.2;

  const int rounds = 20000;
  Vec mean = Vec::Zero(3);
  Vec m2 = Vec::Zero(3);
  for (int t = 1; t <= rounds; ++t) {
    Vec aggregate = Vec::Zero(3);
    for (int k = 0; k < k_workers; ++k) {
      RngStream rng = RngStream::keyed(123, k, t, RngPhase::kQuantFull);
      QuantizedVector qv = quantize(v, sched, rng);
      qv.norm = static_cast<double>(static_cast<float>(qv.norm));
      const SerializedMessage msg = serialize_message(qv, book, sched);
      const WireMessage parsed =
          parse_message(msg.bytes, CodingScheme::huffman, 0, &book);
      aggregate += reconstruct(parsed.qv, sched);
    }
    aggregate /= k_workers;
    const Vec delta = aggregate - mean;
    mean += delta / t;
    m2 += delta.cwiseProduct(aggregate - mean);
  }
  for (int i = 0; i < 3; ++i) {
    const double se = std::sqrt(m2[i] / rounds) / std::sqrt(double(rounds));
    CHECK(std::abs(mean[i] - v[i]) <= 3.0 * se + 1e-7);
  }
}

TEST_CASE("gap is recorded exactly at checkpoints") {
  SimConfig config = base_config();
  config.iterations = 30;
  config.checkpoints = {10, 20, 30};
  const SimResult res = run(config, 1);
  int with_gap = 0;
  for (const RoundMetrics& rm : res.metrics) {
    if (rm.gap) {
      ++with_gap;
      CHECK((rm.t == 10 || rm.t == 20 || rm.t == 30));
      CHECK(*rm.gap >= -1e-9);
    }
  }
  CHECK(with_gap == 3);
  CHECK(res.trajectory.gaps.size() == 3);
}

TEST_CASE("bit accounting is exact against serialized lengths") {
  SimConfig config = base_config();
  config.scheme = CodingScheme::huffman;
  config.iterations = 5;
  config.checkpoints = {5};
  const SimResult res = run(config, 4);
  long total = 0;
  for (const RoundMetrics& rm : res.metrics)
    for (long bits : rm.bits_per_worker) total += bits;
  CHECK(total == res.total_bits);
  for (size_t i = 0; i < res.metrics.size(); ++i)
    CHECK(res.trajectory.bits_per_iteration[i] ==
          [&] {
            long s = 0;
            for (long b : res.metrics[i].bits_per_worker) s += b;
            return s;
          }());
}
