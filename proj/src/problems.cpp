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

#include "qgenx/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace qgenx {

namespace {

Vec seeded_solution(int d, uint64_t seed) {
  RngStream rng = RngStream::keyed(seed, 0, 0, RngPhase::kMisc);
  Vec x(d);
  for (int i = 0; i < d; ++i) {
    const double magnitude = 0.5 + rng.next_double();       // [0.5, 1.5)
    x[i] = rng.next_double() < 0.5 ? -magnitude : magnitude;
  }
  return x;
}

Problem make_bilinear_skew(const BilinearSkewSpec& spec,
                           const NoiseModel& noise) {
  if (spec.d < 2)
    throw std::invalid_argument("bilinear-skew: d must be >= 2");
  if (!(spec.scale > 0.0))
    throw std::invalid_argument("bilinear-skew: scale must be positive");
  Eigen::MatrixXd m;
  if (spec.d == 2) {
    m.resize(2, 2);
    m << 0.0, spec.scale, -spec.scale, 0.0;
  } else {
    RngStream rng = RngStream::keyed(spec.seed, 1, 0, RngPhase::kMisc);
    Eigen::MatrixXd b(spec.d, spec.d);
    for (int i = 0; i < spec.d; ++i)
      for (int j = 0; j < spec.d; ++j) b(i, j) = rng.next_gaussian();
    m = spec.scale / std::sqrt(static_cast<double>(spec.d)) *
        (b - b.transpose());
  }
  Vec x_star = seeded_solution(spec.d, spec.seed);
  Operator op = Operator::affine(m, Vec(-m * x_star), OperatorKind::affine_skew,
                                 std::nullopt, x_star);
  return Problem{op, NoisyOracle(op, noise)};
}

Problem make_diagonal(const DiagonalMonotoneSpec& spec,
                      const NoiseModel& noise) {
  if (spec.d < 1) throw std::invalid_argument("diagonal-monotone: d must be >= 1");
  if (!(spec.eig_min > 0.0) || spec.eig_max < spec.eig_min)
    throw std::invalid_argument(
        "diagonal-monotone: eigenvalues must satisfy 0 < eig_min <= eig_max");
  Vec diag(spec.d);
  for (int i = 0; i < spec.d; ++i) {
    const double t = spec.d == 1 ? 0.0 : static_cast<double>(i) / (spec.d - 1);
    diag[i] = spec.log_spaced
                  ? spec.eig_min * std::pow(spec.eig_max / spec.eig_min, t)
                  : spec.eig_min + t * (spec.eig_max - spec.eig_min);
  }
  Vec x_star = seeded_solution(spec.d, spec.seed);
  Eigen::MatrixXd m = diag.asDiagonal();
  Operator op =
      Operator::affine(m, Vec(-m * x_star),
                       OperatorKind::diagonal_strongly_monotone,
                       1.0 / spec.eig_max, x_star);
  return Problem{op, NoisyOracle(op, noise)};
}

Problem make_rcd(const RcdSpec& spec) {
  if (spec.d < 1) throw std::invalid_argument("rcd: d must be >= 1");
  Vec h;
  if (spec.curvature) {
    h = *spec.curvature;
    if (h.size() != spec.d || (h.array() <= 0.0).any())
      throw std::invalid_argument("rcd: curvature must be positive, size d");
  } else {
    RngStream rng = RngStream::keyed(spec.seed, 2, 0, RngPhase::kMisc);
    h.resize(spec.d);
    for (int i = 0; i < spec.d; ++i) h[i] = 0.5 + 1.5 * rng.next_double();
  }
  Vec x_star = spec.solution ? *spec.solution : seeded_solution(spec.d, spec.seed);
  if (x_star.size() != spec.d)
    throw std::invalid_argument("rcd: solution must have size d");
  Eigen::MatrixXd m = h.asDiagonal();
  Operator op =
      Operator::affine(m, Vec(-m * x_star),
                       OperatorKind::diagonal_strongly_monotone,
                       1.0 / h.maxCoeff(), x_star);
  const int d = spec.d;
  auto sampler = [d](const Operator& a, const Vec& x, RngStream& rng) {
    const Vec grad = a(x);
    const int i = std::min(static_cast<int>(rng.next_double() * d), d - 1);
    Vec g = Vec::Zero(d);
    g[i] = static_cast<double>(d) * grad[i];
    return g;
  };
  return Problem{op, NoisyOracle(op, sampler)};
}

Problem make_random_player(const RandomPlayerSpec& spec) {
  if (spec.players < 1 || spec.player_dim < 1)
    throw std::invalid_argument("random-player: bad sizes");
  std::vector<double> probs = spec.probs;
  if (probs.empty())
    probs.assign(spec.players, 1.0 / spec.players);
  if (static_cast<int>(probs.size()) != spec.players)
    throw std::invalid_argument("random-player: probs size mismatch");
  double total = 0.0;
  for (double p : probs) {
    if (!(p > 0.0)) throw std::invalid_argument("random-player: probs must be > 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("random-player: probs must sum to 1");

  const int n = spec.players;
  const int pd = spec.player_dim;
  const int d = n * pd;
  RngStream rng = RngStream::keyed(spec.seed, 3, 0, RngPhase::kMisc);
  Vec h(n);
  for (int i = 0; i < n; ++i) h[i] = 0.5 + 1.5 * rng.next_double();
  // Cyclic linear coupling small enough to keep the symmetric part positive
  // definite (Gershgorin: h_i - theta > 0).
  const double theta = 0.5 * h.minCoeff();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const int next = (i + 1) % n;
    for (int k = 0; k < pd; ++k) {
      m(i * pd + k, i * pd + k) = h[i];
      if (n > 1) m(i * pd + k, next * pd + k) = theta;
    }
  }
  Vec x_star = seeded_solution(d, spec.seed);

  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  const double lam_min = eig.eigenvalues().minCoeff();
  const double op_norm_sq = m.squaredNorm();  // Frobenius upper-bounds sigma_max
  Operator op = Operator::affine(m, Vec(-m * x_star), OperatorKind::affine_general,
                                 lam_min / op_norm_sq, x_star);

  auto sampler = [n, pd, probs](const Operator& a, const Vec& x, RngStream& rng) {
    const Vec full = a(x);
    double u = rng.next_double();
    int player = n - 1;
    for (int i = 0; i < n; ++i) {
      if (u < probs[i]) {
        player = i;
        break;
      }
      u -= probs[i];
    }
    Vec g = Vec::Zero(full.size());
    g.segment(player * pd, pd) = full.segment(player * pd, pd) / probs[player];
    return g;
  };
  return Problem{op, NoisyOracle(op, sampler)};
}

}  // namespace

Problem make_problem(const ProblemSpec& spec, const NoiseModel& noise) {
  if (const auto* bs = std::get_if<BilinearSkewSpec>(&spec))
    return make_bilinear_skew(*bs, noise);
  if (const auto* dm = std::get_if<DiagonalMonotoneSpec>(&spec))
    return make_diagonal(*dm, noise);
  if (const auto* rc = std::get_if<RcdSpec>(&spec)) return make_rcd(*rc);
  return make_random_player(std::get<RandomPlayerSpec>(spec));
}

}  // namespace qgenx
