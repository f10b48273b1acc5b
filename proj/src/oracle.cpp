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

#include "qgenx/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace qgenx {

NoisyOracle::NoisyOracle(Operator op, NoiseModel noise)
    : op_(std::make_shared<Operator>(std::move(op))), noise_(noise) {
  if (const auto* abs = std::get_if<AbsoluteNoise>(&noise_)) {
    if (abs->sigma < 0.0 || !(abs->bound > 0.0))
      throw std::invalid_argument("NoisyOracle: bad absolute-noise params");
    bound_ = abs->bound;
  } else if (const auto* rel = std::get_if<RelativeNoise>(&noise_)) {
    if (rel->c < 0.0 || !(rel->bound > 0.0))
      throw std::invalid_argument("NoisyOracle: bad relative-noise params");
    bound_ = rel->bound;
  }
}

NoisyOracle::NoisyOracle(Operator op, CustomSampler sampler, double bound)
    : op_(std::make_shared<Operator>(std::move(op))),
      sampler_(std::move(sampler)),
      bound_(bound) {
  if (!sampler_) throw std::invalid_argument("NoisyOracle: empty sampler");
}

NoisyOracle::Sample NoisyOracle::evaluate(const Vec& x, RngStream& rng) const {
  if (x.size() != op_->dim())
    throw std::invalid_argument("NoisyOracle: dimension mismatch");

  Vec g;
  if (sampler_) {
    g = sampler_(*op_, x, rng);
  } else if (const auto* abs = std::get_if<AbsoluteNoise>(&noise_)) {
    g = (*op_)(x);
    const double per_coord = abs->sigma / std::sqrt(static_cast<double>(g.size()));
    for (Eigen::Index i = 0; i < g.size(); ++i)
      g[i] += per_coord * rng.next_gaussian();
  } else if (const auto* rel = std::get_if<RelativeNoise>(&noise_)) {
    g = (*op_)(x);
    // eps_i uniform on [-sqrt(3c), sqrt(3c)] has variance exactly c.
    const double half_width = std::sqrt(3.0 * rel->c);
    for (Eigen::Index i = 0; i < g.size(); ++i)
      g[i] *= 1.0 + half_width * (2.0 * rng.next_double() - 1.0);
  } else {
    g = (*op_)(x);
  }

  if (!g.allFinite())
    throw std::runtime_error("NoisyOracle: non-finite dual vector");

  Sample sample{std::move(g), false};
  const double n = sample.g.norm();
  if (n > bound_) {
    sample.g *= bound_ / n;
    sample.clipped = true;
  }
  return sample;
}

}  // namespace qgenx
