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

#ifndef QGENX_QUANTIZER_HPP
#define QGENX_QUANTIZER_HPP

#include <functional>

#include "qgenx/levels.hpp"
#include "qgenx/rng.hpp"

namespace qgenx {

// Unbiased random rounding of v onto the schedule grid. Each coordinate
// consumes exactly one uniform draw, in coordinate order; a draw strictly
// below the relative distance rho(u) selects the upper level. The zero
// vector maps to (norm 0, all indices 0) without consuming randomness.
QuantizedVector quantize(const Vec& v, const LevelSchedule& schedule,
                         RngStream& rng);

// Same rounding with an externally supplied uniform source (one call per
// coordinate); lets tests pin draws.
QuantizedVector quantize(const Vec& v, const LevelSchedule& schedule,
                         const std::function<double()>& uniform);

// Inverse map value_i = norm * sign_i * l_{index_i}. Throws if the
// quantized vector was produced under a different schedule version.
Vec reconstruct(const QuantizedVector& qv, const LevelSchedule& schedule);

// Exact E||Q(v) - v||_2^2 = ||v||_q^2 * sum_i (l_{t+1} - u_i)(u_i - l_t)
// for nonzero finite v.
double expected_variance(const Vec& v, const LevelSchedule& schedule);

// Variance inflation bound and its regime diagnostics.
struct VarianceBoundReport {
  double eps_q = 0.0;           // E||Q(v)-v||^2 <= eps_q * ||v||_2^2
  double max_level_ratio = 0.0; // max_{1<=j<=s} l_{j+1} / l_j
  double dim_threshold = 0.0;   // (2 / l_1)^{min{q,2}}
  bool small_dim_regime = true; // d <= dim_threshold
  double p_star = 0.0;          // optimizer of the K_p tradeoff, in [0, 1)
  double k_p = 0.0;             // K_{p*}
};

// At d == dim_threshold both indicator branches are live; the report takes
// the larger value, which keeps the bound safe.
VarianceBoundReport variance_bound(const LevelSchedule& schedule, int dim);

}  // namespace qgenx

#endif  // QGENX_QUANTIZER_HPP
