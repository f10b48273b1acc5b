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

#include "qgenx/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qgenx {

namespace {
constexpr double kMinLevelGap = 1e-6;
constexpr double kBisectTol = 1e-10;
constexpr double kSweepTol = 1e-8;
constexpr int kMaxSweeps = 100;
constexpr int kGradientSteps = 500;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
}  // namespace

CoordinateCDF::CoordinateCDF(Eigen::VectorXd bin_mass,
                             std::vector<double> mixture_weights,
                             std::vector<double> sample_norms)
    : bin_mass_(std::move(bin_mass)),
      mixture_weights_(std::move(mixture_weights)),
      sample_norms_(std::move(sample_norms)) {
  if (bin_mass_.size() < 1)
    throw std::invalid_argument("CoordinateCDF: empty histogram");
  const double total = bin_mass_.sum();
  if (total <= 0.0)
    throw std::invalid_argument("CoordinateCDF: zero total mass");
  bin_mass_ /= total;
  cum_mass_.resize(bin_mass_.size() + 1);
  cum_mass_[0] = 0.0;
  for (Eigen::Index b = 0; b < bin_mass_.size(); ++b)
    cum_mass_[b + 1] = cum_mass_[b] + bin_mass_[b];
  cum_mass_[bin_mass_.size()] = 1.0;
}

CoordinateCDF CoordinateCDF::uniform(int bins) {
  return CoordinateCDF(Eigen::VectorXd::Constant(bins, 1.0 / bins), {1.0}, {1.0});
}

double CoordinateCDF::mass(double a, double b) const {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (b <= a) return 0.0;
  const int n = bins();
  const int b_lo = std::min(static_cast<int>(a * n), n - 1);
  const int b_hi = std::min(static_cast<int>(b * n), n - 1);
  const double w = 1.0 / n;
  if (b_lo == b_hi) return bin_mass_[b_lo] * (b - a) / w;
  double acc = bin_mass_[b_lo] * ((b_lo + 1) * w - a) / w;
  acc += cum_mass_[b_hi] - cum_mass_[b_lo + 1];
  acc += bin_mass_[b_hi] * (b - b_hi * w) / w;
  return acc;
}

double CoordinateCDF::value(double u) const { return mass(0.0, u); }

double CoordinateCDF::first_moment(double a, double b) const {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (b <= a) return 0.0;
  const int n = bins();
  const double w = 1.0 / n;
  const int b_lo = std::min(static_cast<int>(a * n), n - 1);
  const int b_hi = std::min(static_cast<int>(b * n), n - 1);
  double acc = 0.0;
  for (int bb = b_lo; bb <= b_hi; ++bb) {
    const double lo = std::max(a, bb * w);
    const double hi = std::min(b, (bb + 1) * w);
    if (hi <= lo) continue;
    acc += bin_mass_[bb] / w * 0.5 * (hi * hi - lo * lo);
  }
  return acc;
}

double CoordinateCDF::second_moment(double a, double b) const {
  a = std::clamp(a, 0.0, 1.0);
  b = std::clamp(b, 0.0, 1.0);
  if (b <= a) return 0.0;
  const int n = bins();
  const double w = 1.0 / n;
  const int b_lo = std::min(static_cast<int>(a * n), n - 1);
  const int b_hi = std::min(static_cast<int>(b * n), n - 1);
  double acc = 0.0;
  for (int bb = b_lo; bb <= b_hi; ++bb) {
    const double lo = std::max(a, bb * w);
    const double hi = std::min(b, (bb + 1) * w);
    if (hi <= lo) continue;
    acc += bin_mass_[bb] / w * (hi * hi * hi - lo * lo * lo) / 3.0;
  }
  return acc;
}

CoordinateCDF estimate_cdf(const std::vector<Vec>& samples, NormOrder q,
                           int bins, CdfModel model) {
  if (bins < 1) throw std::invalid_argument("estimate_cdf: bins must be >= 1");
  double norm_sq_total = 0.0;
  std::vector<double> norms(samples.size(), 0.0);
  for (size_t j = 0; j < samples.size(); ++j) {
    norms[j] = norm_of(samples[j], q);
    norm_sq_total += norms[j] * norms[j];
  }
  if (norm_sq_total == 0.0)
    throw std::invalid_argument("estimate_cdf: all samples are zero");

  std::vector<double> lambda(samples.size(), 0.0);
  for (size_t j = 0; j < samples.size(); ++j)
    lambda[j] = norms[j] * norms[j] / norm_sq_total;

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(bins);
  if (model == CdfModel::empirical) {
    for (size_t j = 0; j < samples.size(); ++j) {
      if (lambda[j] == 0.0) continue;
      const Vec& g = samples[j];
      const double per_coord = lambda[j] / static_cast<double>(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double u = std::min(std::abs(g[i]) / norms[j], 1.0);
        const int b = std::min(static_cast<int>(u * bins), bins - 1);
        mass[b] += per_coord;
      }
    }
  } else {
    // Sufficient statistics of a log-normal on (0, 1]: weighted mean and
    // variance of log u, plus an atom for exact zeros.
    double w_pos = 0.0, w_zero = 0.0, mean = 0.0, m2 = 0.0;
    for (size_t j = 0; j < samples.size(); ++j) {
      if (lambda[j] == 0.0) continue;
      const Vec& g = samples[j];
      const double per_coord = lambda[j] / static_cast<double>(g.size());
      for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double u = std::min(std::abs(g[i]) / norms[j], 1.0);
        if (u <= 0.0) {
          w_zero += per_coord;
          continue;
        }
        const double lu = std::log(u);
        w_pos += per_coord;
        const double delta = lu - mean;
        mean += per_coord / w_pos * delta;
        m2 += per_coord * delta * (lu - mean);
      }
    }
    if (w_pos == 0.0) {
      mass[0] = 1.0;
    } else {
      const double sd = std::sqrt(std::max(m2 / w_pos, 1e-12));
      const double trunc = normal_cdf((0.0 - mean) / sd);  // log u <= 0
      double prev = 0.0;
      for (int b = 0; b < bins; ++b) {
        const double edge = static_cast<double>(b + 1) / bins;
        const double cdf =
            normal_cdf((std::log(edge) - mean) / sd) / std::max(trunc, 1e-300);
        mass[b] += w_pos * (std::min(cdf, 1.0) - prev);
        prev = std::min(cdf, 1.0);
      }
      mass[0] += w_zero;
    }
  }
  return CoordinateCDF(std::move(mass), std::move(lambda), std::move(norms));
}

double quantization_objective(const CoordinateCDF& cdf,
                              const LevelSchedule& schedule) {
  schedule.validate();
  double acc = 0.0;
  for (Eigen::Index j = 0; j + 1 < schedule.levels.size(); ++j) {
    const double lo = schedule.levels[j];
    const double hi = schedule.levels[j + 1];
    acc += -cdf.second_moment(lo, hi) + (hi + lo) * cdf.first_moment(lo, hi) -
           hi * lo * cdf.mass(lo, hi);
  }
  return acc;
}

namespace {

// d/dl_j of the objective: mass pulled toward l_j from the left minus mass
// pulled from the right. Nondecreasing in l_j, so the objective is convex
// along each coordinate and bisection finds the coordinate minimum.
double level_gradient(const CoordinateCDF& cdf, double prev, double x,
                      double next) {
  const double left = cdf.first_moment(prev, x) - prev * cdf.mass(prev, x);
  const double right = next * cdf.mass(x, next) - cdf.first_moment(x, next);
  return left - right;
}

void clamp_levels(Eigen::VectorXd& levels) {
  const int s = static_cast<int>(levels.size()) - 2;
  for (int j = 1; j <= s; ++j)
    levels[j] = std::max(levels[j], levels[j - 1] + kMinLevelGap);
  for (int j = s; j >= 1; --j)
    levels[j] = std::min(levels[j], levels[j + 1] - kMinLevelGap);
}

}  // namespace

LevelSchedule optimize_levels(const CoordinateCDF& cdf, int s,
                              LevelOptMethod method, NormOrder q,
                              int new_version) {
  if (s < 1) throw std::invalid_argument("optimize_levels: s must be >= 1");
  LevelSchedule sched = LevelSchedule::uniform(s, q, new_version);
  Eigen::VectorXd levels = sched.levels;
  Eigen::VectorXd best = levels;
  sched.levels = levels;
  double best_obj = quantization_objective(cdf, sched);

  if (method == LevelOptMethod::coordinate) {
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
      for (int j = 1; j <= s; ++j) {
        double lo = levels[j - 1] + kMinLevelGap;
        double hi = levels[j + 1] - kMinLevelGap;
        if (hi <= lo) {
          levels[j] = 0.5 * (levels[j - 1] + levels[j + 1]);
          continue;
        }
        if (level_gradient(cdf, levels[j - 1], lo, levels[j + 1]) >= 0.0) {
          levels[j] = lo;
        } else if (level_gradient(cdf, levels[j - 1], hi, levels[j + 1]) <= 0.0) {
          levels[j] = hi;
        } else {
          while (hi - lo > kBisectTol) {
            const double mid = 0.5 * (lo + hi);
            if (level_gradient(cdf, levels[j - 1], mid, levels[j + 1]) < 0.0)
              lo = mid;
            else
              hi = mid;
          }
          levels[j] = 0.5 * (lo + hi);
        }
      }
      sched.levels = levels;
      const double obj = quantization_objective(cdf, sched);
      const double improvement = best_obj - obj;
      if (obj < best_obj) {
        best_obj = obj;
        best = levels;
      }
      if (improvement < kSweepTol) break;
    }
  } else {
    for (int step = 0; step < kGradientSteps; ++step) {
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(levels.size());
      for (int j = 1; j <= s; ++j)
        grad[j] = level_gradient(cdf, levels[j - 1], levels[j], levels[j + 1]);
      double eta = 0.5;
      bool improved = false;
      for (int halving = 0; halving < 20; ++halving, eta *= 0.5) {
        Eigen::VectorXd trial = levels - eta * grad;
        std::sort(trial.data() + 1, trial.data() + 1 + s);
        trial[0] = 0.0;
        trial[s + 1] = 1.0;
        clamp_levels(trial);
        sched.levels = trial;
        const double obj = quantization_objective(cdf, sched);
        if (obj < best_obj) {
          best_obj = obj;
          best = trial;
          levels = trial;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }

  sched.levels = best;
  clamp_levels(sched.levels);
  sched.validate();
  return sched;
}

Eigen::VectorXd level_weights(const CoordinateCDF& cdf,
                              const LevelSchedule& schedule) {
  schedule.validate();
  const int s = schedule.num_inner_levels();
  const Eigen::VectorXd& l = schedule.levels;
  Eigen::VectorXd p = Eigen::VectorXd::Zero(s + 2);
  // Mass in [l_j, l_{j+1}] splits between the endpoints with the rounding
  // probabilities of the quantizer, so each interval contributes
  // (upper - u)/(width) to the lower symbol and (u - lower)/width above.
  for (int j = 0; j <= s; ++j) {
    const double lo = l[j];
    const double hi = l[j + 1];
    const double width = hi - lo;
    p[j] += (hi * cdf.mass(lo, hi) - cdf.first_moment(lo, hi)) / width;
    p[j + 1] += (cdf.first_moment(lo, hi) - lo * cdf.mass(lo, hi)) / width;
  }
  return p;
}

}  // namespace qgenx
