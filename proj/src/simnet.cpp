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

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "qgenx/quantizer.hpp"

namespace qgenx {

namespace {

Codebook make_codebook(CodingScheme scheme, const Eigen::VectorXd& weights) {
  if (scheme == CodingScheme::elias)
    return Codebook::elias_codebook(static_cast<int>(weights.size()));
  return Codebook::huffman(weights);
}

// Uniform over the s + 2 symbols until statistics exist.
Eigen::VectorXd initial_weights(int symbol_count) {
  return Eigen::VectorXd::Constant(symbol_count, 1.0 / symbol_count);
}

struct Broadcast {
  std::vector<Vec> decoded;  // what every receiver aggregates
  long bits_per_worker_sum = 0;
};

}  // namespace

SimResult run(const SimConfig& config, uint64_t seed) {
  if (config.workers < 1 || config.iterations < 1)
    throw std::invalid_argument("simnet: bad workers/iterations");
  const Problem problem = make_problem(config.problem, config.noise);
  const int dim = problem.op.dim();
  const int K = config.workers;

  SimResult result;
  result.domain.center = config.domain_center.value_or(
      problem.op.solution().value_or(Vec::Zero(dim)));
  result.domain.radius = config.domain_radius;

  LevelSchedule schedule = LevelSchedule::uniform(config.levels, config.norm);
  const int symbols = config.levels + 2;
  Eigen::VectorXd weights = initial_weights(symbols);
  std::optional<Codebook> codebook;
  if (config.scheme != CodingScheme::fp32)
    codebook = make_codebook(config.scheme, weights);

  VarianceBoundReport bound = variance_bound(schedule, dim);
  const auto record_segment = [&](long from_t) {
    ScheduleSegment seg;
    seg.version = schedule.version;
    seg.from_iteration = from_t;
    seg.eps_q = bound.eps_q;
    seg.weights = weights;
    seg.bound_bits = code_length_stats(weights, dim).bound_bits;
    result.segments.push_back(std::move(seg));
  };
  record_segment(1);

  const auto check_sandwich = [&] {
    if (!codebook || config.scheme != CodingScheme::huffman) return;
    const double h = code_length_stats(weights, dim).entropy_bits;
    const double mean_len = codebook->expected_length(weights);
    if (mean_len < h - 1e-9 || mean_len > h + 1.0 + 1e-9)
      ++result.code_sandwich_violations;
  };
  check_sandwich();

  SolverState state(dim, K, config.variant);
  std::vector<std::deque<Vec>> windows(K);
  RunningMean ergodic;

  const auto push_window = [&](int k, const Vec& v) {
    windows[k].push_back(v);
    if (static_cast<int>(windows[k].size()) > config.stats_window)
      windows[k].pop_front();
  };

  // Quantize, frame, broadcast and decode one phase worth of duals. The
  // decoded vectors are what all workers (including the sender) aggregate,
  // so state stays identical everywhere by construction.
  const auto broadcast_phase = [&](const std::vector<Vec>& duals, long t,
                                   RngPhase quant_phase, RoundMetrics& rm) {
    Broadcast out;
    out.decoded.resize(K);
    for (int k = 0; k < K; ++k) {
      SerializedMessage wire_msg;
      if (config.scheme == CodingScheme::fp32) {
        wire_msg = serialize_fp32_message(duals[k], schedule.version);
        const WireMessage parsed = parse_message(
            wire_msg.bytes, CodingScheme::fp32, schedule.version, nullptr);
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = static_cast<double>(parsed.raw[i]);
        out.decoded[k] = std::move(v);
      } else {
        RngStream rng = RngStream::keyed(seed, k, t, quant_phase);
        const QuantizedVector qv = quantize(duals[k], schedule, rng);
        if (qv.norm > 0.0) {
          const double ev = expected_variance(duals[k], schedule);
          const double vn = duals[k].squaredNorm();
          if (ev > bound.eps_q * vn * (1.0 + 1e-9) + 1e-15)
            ++result.variance_bound_violations;
        }
        wire_msg = serialize_message(qv, *codebook, schedule);
        const WireMessage parsed =
            parse_message(wire_msg.bytes, config.scheme, schedule.version,
                          &*codebook);
        out.decoded[k] = reconstruct(parsed.qv, schedule);
      }
      const long bits = static_cast<long>(wire_msg.content_bits);
      rm.bits_per_worker[k] += bits;
      out.bits_per_worker_sum += bits;
      rm.quant_err_sq_mean += (out.decoded[k] - duals[k]).squaredNorm();
    }
    return out;
  };

  const auto maybe_update_levels = [&](long t) {
    if (std::find(config.update_steps.begin(), config.update_steps.end(), t) ==
        config.update_steps.end())
      return;
    std::vector<Vec> samples;
    for (const auto& w : windows)
      samples.insert(samples.end(), w.begin(), w.end());
    const bool any_nonzero = std::any_of(
        samples.begin(), samples.end(),
        [&](const Vec& v) { return norm_of(v, config.norm) > 0.0; });
    if (samples.empty() || !any_nonzero) return;
    const CoordinateCDF cdf =
        estimate_cdf(samples, config.norm, config.cdf_bins, config.cdf_model);
    schedule = optimize_levels(cdf, config.levels, config.level_method,
                               config.norm, schedule.version + 1);
    weights = level_weights(cdf, schedule);
    bound = variance_bound(schedule, dim);
    if (config.scheme != CodingScheme::fp32) {
      codebook = make_codebook(config.scheme, weights);
      check_sandwich();
    }
    record_segment(t);
  };

  for (long t = 1; t <= config.iterations; ++t) {
    maybe_update_levels(t);

    RoundMetrics rm;
    rm.t = t;
    rm.bits_per_worker.assign(K, 0);
    rm.schedule_version = schedule.version;

    // Phase one. DA contributes zeros and OptDA replays last round's
    // decoded half-step duals; neither costs bits.
    std::vector<Vec> first_decoded;
    int messages = 0;
    if (config.variant == Variant::de) {
      std::vector<Vec> duals(K);
      for (int k = 0; k < K; ++k) {
        RngStream rng = RngStream::keyed(seed, k, t, RngPhase::kOracleFull);
        auto sample = problem.oracle.evaluate(state.x(), rng);
        rm.clip_events += sample.clipped ? 1 : 0;
        push_window(k, sample.g);
        duals[k] = std::move(sample.g);
      }
      Broadcast b = broadcast_phase(duals, t, RngPhase::kQuantFull, rm);
      first_decoded = std::move(b.decoded);
      messages += K;
    } else if (config.variant == Variant::optda) {
      first_decoded = state.previous_half_duals();
    } else {
      first_decoded.assign(K, Vec::Zero(dim));
    }

    const Vec x_half = state.begin_step(first_decoded);

    // Phase two: always a fresh oracle query at X_{t+1/2}.
    std::vector<Vec> half_duals(K);
    for (int k = 0; k < K; ++k) {
      RngStream rng = RngStream::keyed(seed, k, t, RngPhase::kOracleHalf);
      auto sample = problem.oracle.evaluate(x_half, rng);
      rm.clip_events += sample.clipped ? 1 : 0;
      push_window(k, sample.g);
      half_duals[k] = std::move(sample.g);
    }
    Broadcast half_b =
        broadcast_phase(half_duals, t, RngPhase::kQuantHalf, rm);
    messages += K;
    state.finish_step(half_b.decoded);

    ergodic.add(state.x_half());
    result.trajectory.half_iterates.push_back(state.x_half());

    long round_bits = 0;
    for (long b : rm.bits_per_worker) round_bits += b;
    result.trajectory.bits_per_iteration.push_back(round_bits);
    result.total_bits += round_bits;
    result.clip_events_total += rm.clip_events;
    rm.quant_err_sq_mean /= std::max(messages, 1);

    if (std::find(config.checkpoints.begin(), config.checkpoints.end(), t) !=
        config.checkpoints.end()) {
      rm.gap = restricted_gap(problem.op, ergodic.mean(), result.domain).value;
      result.trajectory.gaps.push_back(*rm.gap);
    }
    result.metrics.push_back(std::move(rm));
  }

  result.ergodic = ergodic.mean();
  result.final_gap =
      restricted_gap(problem.op, result.ergodic, result.domain).value;
  return result;
}

}  // namespace qgenx
