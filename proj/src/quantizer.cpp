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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgenx {

double norm_of(const Vec& v, NormOrder q) {
  switch (q) {
    case NormOrder::l1:
      return v.lpNorm<1>();
    case NormOrder::l2:
      return v.norm();
    case NormOrder::linf:
      return v.lpNorm<Eigen::Infinity>();
  }
  return v.norm();
}

int min_q2(NormOrder q) { return q == NormOrder::l1 ? 1 : 2; }

LevelSchedule LevelSchedule::uniform(int s, NormOrder q, int version) {
  if (s < 1) throw std::invalid_argument("LevelSchedule: s must be >= 1");
  LevelSchedule sched;
  sched.levels = Eigen::VectorXd::LinSpaced(s + 2, 0.0, 1.0);
  sched.q = q;
  sched.version = version;
  return sched;
}

void LevelSchedule::validate() const {
  if (levels.size() < 3)
    throw std::invalid_argument("LevelSchedule: need at least one inner level");
  if (levels[0] != 0.0 || levels[levels.size() - 1] != 1.0)
    throw std::invalid_argument("LevelSchedule: endpoints must be 0 and 1");
  for (Eigen::Index j = 0; j + 1 < levels.size(); ++j) {
    if (!(levels[j] < levels[j + 1]))
      throw std::invalid_argument("LevelSchedule: levels must strictly increase");
  }
}

namespace {

// Index of the interval [l_t, l_{t+1}) containing u, with u == 1 mapped to
// the top interval.
int interval_index(const Eigen::VectorXd& levels, double u) {
  const double* begin = levels.data();
  const double* end = begin + levels.size();
  int idx = static_cast<int>(std::upper_bound(begin, end, u) - begin) - 1;
  return std::min(idx, static_cast<int>(levels.size()) - 2);
}

QuantizedVector quantize_impl(const Vec& v, const LevelSchedule& schedule,
                              const std::function<double()>& uniform) {
  schedule.validate();
  if (!v.allFinite())
    throw std::invalid_argument("quantize: input has non-finite entries");

  QuantizedVector qv;
  qv.schedule_version = schedule.version;
  qv.signs.assign(v.size(), 1);
  qv.indices.assign(v.size(), 0);
  const double norm = norm_of(v, schedule.q);
  if (norm == 0.0) return qv;  // all-zero; no randomness consumed
  qv.norm = norm;

  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double u = std::min(std::abs(v[i]) / norm, 1.0);
    int idx = interval_index(schedule.levels, u);
    const double lo = schedule.levels[idx];
    const double hi = schedule.levels[idx + 1];
    const double rho = (u - lo) / (hi - lo);
    if (uniform() < rho) ++idx;
    qv.indices[i] = idx;
    // Zero-index coordinates reconstruct to 0 and carry no sign bit on the
    // wire; canonicalize them to +1.
    qv.signs[i] = (idx != 0 && v[i] < 0.0) ? -1 : 1;
  }
  return qv;
}

}  // namespace

QuantizedVector quantize(const Vec& v, const LevelSchedule& schedule,
                         RngStream& rng) {
  return quantize_impl(v, schedule, [&rng] { return rng.next_double(); });
}

QuantizedVector quantize(const Vec& v, const LevelSchedule& schedule,
                         const std::function<double()>& uniform) {
  return quantize_impl(v, schedule, uniform);
}

Vec reconstruct(const QuantizedVector& qv, const LevelSchedule& schedule) {
  schedule.validate();
  if (qv.schedule_version != schedule.version)
    throw std::invalid_argument("reconstruct: stale schedule version");
  Vec out(qv.dim());
  for (int i = 0; i < qv.dim(); ++i) {
    const int idx = qv.indices[i];
    if (idx < 0 || idx >= schedule.levels.size())
      throw std::invalid_argument("reconstruct: level index out of range");
    out[i] = qv.norm * static_cast<double>(qv.signs[i]) * schedule.levels[idx];
  }
  return out;
}

double expected_variance(const Vec& v, const LevelSchedule& schedule) {
  schedule.validate();
  if (!v.allFinite())
    throw std::invalid_argument("expected_variance: non-finite input");
  const double norm = norm_of(v, schedule.q);
  if (norm == 0.0)
    throw std::invalid_argument("expected_variance: zero vector");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double u = std::min(std::abs(v[i]) / norm, 1.0);
    const int idx = interval_index(schedule.levels, u);
    acc += (schedule.levels[idx + 1] - u) * (u - schedule.levels[idx]);
  }
  return norm * norm * acc;
}

namespace {

double k_of_p(double p) {
  if (p <= 0.0) return 0.25;  // limit of K_p as p -> 0
  const double a = (1.0 / p) / (2.0 / p - 1.0);
  const double b = (1.0 / p - 1.0) / (2.0 / p - 1.0);
  return a * std::pow(b, 1.0 - p);
}

}  // namespace

VarianceBoundReport variance_bound(const LevelSchedule& schedule, int dim) {
  schedule.validate();
  if (dim < 1) throw std::invalid_argument("variance_bound: dim must be >= 1");

  const int s = schedule.num_inner_levels();
  const double l1 = schedule.levels[1];
  double lbar = 0.0;
  for (int j = 1; j <= s; ++j)
    lbar = std::max(lbar, schedule.levels[j + 1] / schedule.levels[j]);

  const int m = min_q2(schedule.q);
  const double d = static_cast<double>(dim);
  const double d_th = std::pow(2.0 / l1, static_cast<double>(m));
  const double base = (lbar + 1.0 / lbar) / 4.0 - 0.5;
  const double small_term = 0.25 * l1 * l1 * std::pow(d, 2.0 / m);
  const double large_term = l1 * std::pow(d, 1.0 / m) - 1.0;

  VarianceBoundReport report;
  report.max_level_ratio = lbar;
  report.dim_threshold = d_th;
  report.small_dim_regime = d <= d_th;
  if (d < d_th) {
    report.eps_q = base + small_term;
  } else if (d > d_th) {
    report.eps_q = base + large_term;
  } else {
    report.eps_q = base + std::max(small_term, large_term);
  }

  const double delta = l1 * std::pow(d, 1.0 / m);
  report.p_star = delta >= 2.0 ? (delta - 2.0) / (delta - 1.0) : 0.0;
  report.k_p = k_of_p(report.p_star);
  return report;
}

}  // namespace qgenx
