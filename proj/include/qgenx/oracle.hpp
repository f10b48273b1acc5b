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

#ifndef QGENX_ORACLE_HPP
#define QGENX_ORACLE_HPP

#include <functional>
#include <limits>
#include <memory>
#include <variant>

#include "qgenx/operator.hpp"

namespace qgenx {

// Additive Gaussian noise with E||U||^2 = sigma^2, clipped to ||g|| <= bound.
struct AbsoluteNoise {
  double sigma = 0.0;
  double bound = std::numeric_limits<double>::infinity();
};

// Per-coordinate multiplicative noise U_i = eps_i * A_i(x) with
// E[eps_i] = 0 and E[eps_i^2] = c, so E||U||^2 = c ||A(x)||^2 exactly and
// the noise vanishes wherever A does.
struct RelativeNoise {
  double c = 0.0;
  double bound = std::numeric_limits<double>::infinity();
};

using NoiseModel = std::variant<std::monostate, AbsoluteNoise, RelativeNoise>;

// Stochastic dual-vector source g(x; w) = A(x) + U(x; w). Immutable and
// thread-safe as long as each caller owns its RngStream.
class NoisyOracle {
 public:
  using CustomSampler =
      std::function<Vec(const Operator&, const Vec&, RngStream&)>;

  NoisyOracle(Operator op, NoiseModel noise);
  // Intrinsic-randomness oracles (coordinate descent, player sampling):
  // the sampler must be unbiased for A. An infinite bound disables clipping.
  NoisyOracle(Operator op, CustomSampler sampler,
              double bound = std::numeric_limits<double>::infinity());

  struct Sample {
    Vec g;
    bool clipped = false;
  };

  Sample evaluate(const Vec& x, RngStream& rng) const;

  const Operator& op() const { return *op_; }
  const NoiseModel& noise() const { return noise_; }
  double bound() const { return bound_; }

 private:
  std::shared_ptr<const Operator> op_;
  NoiseModel noise_;
  CustomSampler sampler_;
  double bound_ = std::numeric_limits<double>::infinity();
};

}  // namespace qgenx

#endif  // QGENX_ORACLE_HPP
