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

#include "doctest.h"

using namespace qgenx;

namespace {

Operator identity_op(int d) {
  return Operator::affine(Eigen::MatrixXd::Identity(d, d), Vec::Zero(d),
                          OperatorKind::diagonal_strongly_monotone, 1.0,
                          Vec::Zero(d));
}

Operator zero_op(int d) {
  return Operator::affine(Eigen::MatrixXd::Zero(d, d), Vec::Zero(d),
                          OperatorKind::affine_general, std::nullopt,
                          Vec::Zero(d));
}

}  // namespace

TEST_CASE("noise-free oracle is a passthrough") {
  NoisyOracle oracle(identity_op(2), std::monostate{});
  RngStream rng(1);
  Vec x(2);
  x << 1.0, 2.0;
  const auto sample = oracle.evaluate(x, rng);
  CHECK((sample.g - x).norm() == 0.0);
  CHECK_FALSE(sample.clipped);
}

TEST_CASE("oracle rejects dimension mismatches") {
  NoisyOracle oracle(identity_op(2), std::monostate{});
  RngStream rng(1);
  CHECK_THROWS_AS(oracle.evaluate(Vec::Zero(3), rng), std::invalid_argument);
}

TEST_CASE("relative noise vanishes exactly at the solution") {
  NoisyOracle oracle(identity_op(3), RelativeNoise{0.5, 100.0});
  for (uint64_t seed = 0; seed < 50; ++seed) {
    RngStream rng(seed);
    const auto sample = oracle.evaluate(Vec::Zero(3), rng);
    CHECK(sample.g.isZero(0.0));
  }
}

TEST_CASE("absolute noise Monte-Carlo mean at A(x) = 0") {
  // E||U||^2 = sigma^2 split across coordinates; empirical mean of 1e5
  // draws stays within 4 sigma_coord / sqrt(N) of zero, around 0.02 here.
  const int n = 100000;
  NoisyOracle oracle(zero_op(2), AbsoluteNoise{1.0, 1e9});
  RngStream rng(7);
  Vec mean = Vec::Zero(2);
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto sample = oracle.evaluate(Vec::Zero(2), rng);
    mean += sample.g;
    norm_sq += sample.g.squaredNorm();
  }
  mean /= n;
  const double coord_sigma = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < 2; ++i)
    CHECK(std::abs(mean[i]) <= 4.0 * coord_sigma / std::sqrt(double(n)));
  CHECK(norm_sq / n == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("relative noise has variance c ||A(x)||^2") {
  NoisyOracle oracle(identity_op(3), RelativeNoise{0.5, 1e9});
  RngStream rng(13);
  Vec x(3);
  x << 1.0, -2.0, 0.5;
  const double target = 0.5 * x.squaredNorm();
  double acc = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i)
    acc += (oracle.evaluate(x, rng).g - x).squaredNorm();
  CHECK(acc / n == doctest::Approx(target).epsilon(0.02));
}

TEST_CASE("oracle clips at the almost-sure bound and reports it") {
  NoisyOracle oracle(identity_op(2), AbsoluteNoise{1.0, 1.5});
  RngStream rng(3);
  Vec x(2);
  x << 3.0, 4.0;  // ||A(x)|| = 5 > 1.5, always clipped
  int clipped = 0;
  for (int i = 0; i < 100; ++i) {
    const auto sample = oracle.evaluate(x, rng);
    CHECK(sample.g.norm() <= 1.5 + 1e-12);
    clipped += sample.clipped ? 1 : 0;
  }
  CHECK(clipped == 100);
}

TEST_CASE("oracle evaluation is deterministic given the stream key") {
  NoisyOracle oracle(identity_op(2), AbsoluteNoise{0.3, 100.0});
  Vec x(2);
  x << 0.4, -0.1;
  RngStream a = RngStream::keyed(5, 2, 77, RngPhase::kOracleFull);
  RngStream b = RngStream::keyed(5, 2, 77, RngPhase::kOracleFull);
  CHECK((oracle.evaluate(x, a).g - oracle.evaluate(x, b).g).norm() == 0.0);
  RngStream c = RngStream::keyed(5, 2, 77, RngPhase::kOracleFull);
  RngStream d = RngStream::keyed(5, 2, 78, RngPhase::kOracleFull);
  CHECK((oracle.evaluate(x, c).g - oracle.evaluate(x, d).g).norm() != 0.0);
}

TEST_CASE("invalid noise parameters are rejected") {
  CHECK_THROWS_AS(NoisyOracle(identity_op(1), AbsoluteNoise{-1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(NoisyOracle(identity_op(1), RelativeNoise{0.5, 0.0}),
                  std::invalid_argument);
}
