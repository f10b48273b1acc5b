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

#ifndef QGENX_PROBLEMS_HPP
#define QGENX_PROBLEMS_HPP

#include <optional>
#include <variant>
#include <vector>

#include "qgenx/oracle.hpp"

namespace qgenx {

// A(x) = M (x - x*) with M skew-symmetric (d = 2 gives the rotation
// [[0, s], [-s, 0]]); x* is drawn from `seed` away from the origin since the
// solver starts at 0.
struct BilinearSkewSpec {
  int d = 2;
  uint64_t seed = 0;
  double scale = 1.0;
};

// A(x) = diag(h) (x - x*) with h in [eig_min, eig_max]; cocoercive with
// beta = 1 / eig_max.
struct DiagonalMonotoneSpec {
  int d = 2;
  double eig_min = 1.0;
  double eig_max = 1.0;
  bool log_spaced = false;
  uint64_t seed = 0;
};

// Random coordinate descent on the convex quadratic
// f(x) = 1/2 (x - x*)' diag(h) (x - x*): the oracle draws one coordinate
// uniformly and returns d * (grad f)_i * e_i, an unbiased relative-noise
// dual vector.
struct RcdSpec {
  int d = 2;
  uint64_t seed = 0;
  std::optional<Vec> curvature;  // h; defaults seeded in [0.5, 2]
  std::optional<Vec> solution;   // x*; defaults seeded away from 0
};

// N-player convex game with quadratic losses and a weak cyclic coupling;
// the oracle samples player i with probability p_i and returns the
// 1/p_i-scaled single-player gradient block.
struct RandomPlayerSpec {
  int players = 2;
  int player_dim = 1;
  std::vector<double> probs;  // empty = uniform
  uint64_t seed = 0;
};

using ProblemSpec = std::variant<BilinearSkewSpec, DiagonalMonotoneSpec,
                                 RcdSpec, RandomPlayerSpec>;

struct Problem {
  Operator op;
  NoisyOracle oracle;
};

// Builds the operator and its oracle. `noise` applies to bilinear-skew and
// diagonal-monotone; rcd and random-player carry intrinsic randomness and
// ignore it (their noise profile is relative by construction).
Problem make_problem(const ProblemSpec& spec,
                     const NoiseModel& noise = std::monostate{});

}  // namespace qgenx

#endif  // QGENX_PROBLEMS_HPP
