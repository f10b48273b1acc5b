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

#include "qgenx/quantizer.hpp"

#include "doctest.h"

using namespace qgenx;

namespace {

LevelSchedule half_schedule(NormOrder q = NormOrder::l2) {
  LevelSchedule sched;
  sched.levels.resize(3);
  sched.levels << 0.0, 0.5, 1.0;
  sched.q = q;
  return sched;
}

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("quantize zero vector consumes no randomness") {
  int draws = 0;
  const auto counting = [&draws] {
    ++draws;
    return 0.5;
  };
  const QuantizedVector qv = quantize(make_vec({0.0, 0.0}), half_schedule(), counting);
  CHECK(qv.norm == 0.0);
  CHECK(qv.indices == std::vector<int32_t>{0, 0});
  CHECK(draws == 0);
}

TEST_CASE("quantize follows the rounding rule with pinned draws") {
  // v = [3,4], q = 2: u = (0.6, 0.8), rho = (0.2, 0.6). Draw < rho picks the
  // upper level, so draws (0.9, 0.1) give indices (1, 2).
  const Vec v = make_vec({3.0, 4.0});
  std::vector<double> draws = {0.9, 0.1};
  size_t next = 0;
  const QuantizedVector qv =
      quantize(v, half_schedule(), [&] { return draws.at(next++); });
  CHECK(qv.norm == doctest::Approx(5.0));
  CHECK(qv.indices == std::vector<int32_t>{1, 2});
  const Vec rec = reconstruct(qv, half_schedule());
  CHECK(rec[0] == doctest::Approx(2.5));
  CHECK(rec[1] == doctest::Approx(5.0));
}

TEST_CASE("quantize handles negative and on-level coordinates") {
  // u = (0.5, 1): both exactly on levels, deterministic for any draw.
  const Vec v = make_vec({-2.0, 4.0});
  LevelSchedule sched = half_schedule(NormOrder::linf);
  const QuantizedVector qv = quantize(v, sched, [] { return 0.999; });
  CHECK(qv.norm == doctest::Approx(4.0));
  CHECK(qv.signs == std::vector<int8_t>{-1, 1});
  CHECK(qv.indices == std::vector<int32_t>{1, 2});
  CHECK(expected_variance(v, sched) == doctest::Approx(0.0));
}

TEST_CASE("quantize rejects non-finite input") {
  Vec v = make_vec({1.0, 0.0});
  v[1] = std::numeric_limits<double>::quiet_NaN();
  RngStream rng(1);
  CHECK_THROWS_AS(quantize(v, half_schedule(), rng), std::invalid_argument);
}

TEST_CASE("reconstruct golden values and version check") {
  LevelSchedule sched = half_schedule();
  QuantizedVector qv;
  qv.norm = 5.0;
  qv.signs = {1, 1};
  qv.indices = {1, 2};
  const Vec rec = reconstruct(qv, sched);
  CHECK(rec[0] == doctest::Approx(2.5));
  CHECK(rec[1] == doctest::Approx(5.0));

  QuantizedVector top;
  top.norm = 1.0;
  top.signs = {-1};
  top.indices = {2};
  CHECK(reconstruct(top, sched)[0] == doctest::Approx(-1.0));

  QuantizedVector zero;
  zero.norm = 0.0;
  zero.signs = {1, 1};
  zero.indices = {0, 0};
  CHECK(reconstruct(zero, sched).isZero());

  qv.schedule_version = 3;
  CHECK_THROWS_AS(reconstruct(qv, sched), std::invalid_argument);
}

TEST_CASE("expected variance closed form matches outcome enumeration") {
  // All four outcomes of quantizing [3,4] on (0, 0.5, 1):
  //   indices (1,1): err (0.5, 1.5), p = 0.8*0.4
  //   indices (1,2): err (0.5, -1),  p = 0.8*0.6  ... etc. Averaging
  // ||Q(v)-v||^2 gives 25*(0.04 + 0.06) = 2.5.
  const Vec v = make_vec({3.0, 4.0});
  CHECK(expected_variance(v, half_schedule()) == doctest::Approx(2.5));

  double brute = 0.0;
  const double rho0 = 0.2, rho1 = 0.6;
  for (int a = 0; a <= 1; ++a)
    for (int b = 0; b <= 1; ++b) {
      const double pa = a ? rho0 : 1.0 - rho0;
      const double pb = b ? rho1 : 1.0 - rho1;
      const Vec q = make_vec({5.0 * (a ? 1.0 : 0.5), 5.0 * (b ? 1.0 : 0.5)});
      brute += pa * pb * (q - v).squaredNorm();
    }
  CHECK(expected_variance(v, half_schedule()) == doctest::Approx(brute));

  CHECK_THROWS_AS(expected_variance(make_vec({0.0, 0.0}), half_schedule()),
                  std::invalid_argument);
}

TEST_CASE("quantize is unbiased and matches the variance in Monte Carlo") {
  const Vec v = make_vec({3.0, 4.0});
  const LevelSchedule sched = half_schedule();
  RngStream rng(42);
  const int n = 100000;
  Vec mean = Vec::Zero(2);
  double var_acc = 0.0;
  Vec m2 = Vec::Zero(2);
  for (int i = 0; i < n; ++i) {
    const Vec rec = reconstruct(quantize(v, sched, rng), sched);
    const Vec delta = rec - mean;
    mean += delta / (i + 1);
    m2 += delta.cwiseProduct(rec - mean);
    var_acc += (rec - v).squaredNorm();
  }
  for (int i = 0; i < 2; ++i) {
    const double std_err = std::sqrt(m2[i] / n) / std::sqrt(double(n));
    CHECK(std::abs(mean[i] - v[i]) <= std::max(4.0 * std_err, 1e-12));
    CHECK(std::abs(mean[i] - v[i]) <= 0.05);
  }
  CHECK(var_acc / n == doctest::Approx(2.5).epsilon(0.02));
}

TEST_CASE("variance bound hand points") {
  const LevelSchedule sched = half_schedule();
  const VarianceBoundReport small = variance_bound(sched, 4);
  CHECK(small.eps_q == doctest::Approx(0.375));
  CHECK(small.max_level_ratio == doctest::Approx(2.0));
  CHECK(small.dim_threshold == doctest::Approx(16.0));
  CHECK(small.small_dim_regime);
  CHECK(small.p_star == 0.0);  // delta = 0.5 * 2 < 2
  CHECK(small.k_p == doctest::Approx(0.25));

  const VarianceBoundReport large = variance_bound(sched, 64);
  CHECK(large.eps_q == doctest::Approx(3.125));
  CHECK_FALSE(large.small_dim_regime);
  // delta = 4 -> p* = 2/3, K_p = 0.75 * 0.25^(1/3)
  CHECK(large.p_star == doctest::Approx(2.0 / 3.0));
  CHECK(large.k_p == doctest::Approx(0.75 * std::pow(0.25, 1.0 / 3.0)));

  // At d = d_th both indicator branches evaluate to the same value here;
  // the report must still be well defined.
  const VarianceBoundReport edge = variance_bound(sched, 16);
  CHECK(edge.eps_q == doctest::Approx(1.125));
  CHECK(edge.small_dim_regime);
}

TEST_CASE("variance bound holds for adversarial all-equal vectors") {
  // q = 1 with equal coordinates is where the bound is tightest.
  for (int d : {4, 64, 1000}) {
    LevelSchedule sched = half_schedule(NormOrder::l1);
    const Vec v = Vec::Ones(d);
    const double bound = variance_bound(sched, d).eps_q * v.squaredNorm();
    CHECK(expected_variance(v, sched) <= bound * (1.0 + 1e-12));
  }
}

TEST_CASE("variance bound holds on random vectors for all q") {
  RngStream rng(7);
  for (NormOrder q : {NormOrder::l1, NormOrder::l2, NormOrder::linf}) {
    for (int d : {2, 17, 300}) {
      LevelSchedule sched = LevelSchedule::uniform(3, q);
      const double eps_q = variance_bound(sched, d).eps_q;
      for (int trial = 0; trial < 200; ++trial) {
        Vec v(d);
        for (int i = 0; i < d; ++i) v[i] = 2.0 * rng.next_double() - 1.0;
        if (v.norm() == 0.0) continue;
        CHECK(expected_variance(v, sched) <=
              eps_q * v.squaredNorm() * (1.0 + 1e-12));
      }
    }
  }
}

TEST_CASE("schedule validation") {
  CHECK_THROWS_AS(LevelSchedule::uniform(0, NormOrder::l2),
                  std::invalid_argument);
  LevelSchedule bad;
  bad.levels = make_vec({0.0, 0.7, 0.3, 1.0});
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  LevelSchedule bad2;
  bad2.levels = make_vec({0.1, 0.5, 1.0});
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}
