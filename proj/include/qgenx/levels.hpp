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

#ifndef QGENX_LEVELS_HPP
#define QGENX_LEVELS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace qgenx {

using Vec = Eigen::VectorXd;

// Norm used to normalize coordinates before level rounding.
enum class NormOrder { l1, l2, linf };

double norm_of(const Vec& v, NormOrder q);

// Exponent min{q, 2} used by the variance bound; linf is treated as 2.
int min_q2(NormOrder q);

// Quantization grid 0 = l_0 < l_1 < ... < l_s < l_{s+1} = 1 plus the
// normalization order. A schedule is versioned: adaptation produces a new
// schedule with a bumped version instead of mutating in place.
struct LevelSchedule {
  Eigen::VectorXd levels;  // size s + 2
  NormOrder q = NormOrder::l2;
  int version = 0;

  int num_inner_levels() const {
    return static_cast<int>(levels.size()) - 2;
  }

  // Uniformly spaced inner levels j / (s + 1).
  static LevelSchedule uniform(int s, NormOrder q, int version = 0);

  // Throws std::invalid_argument if the grid is not strictly increasing with
  // endpoints 0 and 1 and l_1 > 0.
  void validate() const;
};

// Output of the random rounding: reconstruct(i) = norm * sign_i * l_{index_i}.
// Canonical form: sign_i = +1 wherever index_i = 0 (those coordinates carry
// no sign bit on the wire).
struct QuantizedVector {
  double norm = 0.0;
  std::vector<int8_t> signs;      // entries in {-1, +1}
  std::vector<int32_t> indices;   // entries in [0, s + 1]
  int schedule_version = 0;

  int dim() const { return static_cast<int>(indices.size()); }
  bool operator==(const QuantizedVector&) const = default;
};

}  // namespace qgenx

#endif  // QGENX_LEVELS_HPP
