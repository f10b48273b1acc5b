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

#include "qgenx/ratefit.hpp"

#include <cmath>
#include <stdexcept>

namespace qgenx {

RateFit fit_rate(const std::vector<double>& checkpoints,
                 const std::vector<double>& gaps) {
  if (checkpoints.size() != gaps.size() || checkpoints.size() < 3)
    throw std::invalid_argument("fit_rate: need >= 3 (T, gap) pairs");
  constexpr double kGapFloor = 1e-14;

  RateFit fit;
  fit.checkpoints = checkpoints;
  fit.gaps = gaps;
  std::vector<double> xs(gaps.size()), ys(gaps.size());
  for (size_t i = 0; i < gaps.size(); ++i) {
    if (!(checkpoints[i] > 0.0))
      throw std::invalid_argument("fit_rate: checkpoints must be positive");
    double g = gaps[i];
    if (g < kGapFloor) {
      g = kGapFloor;
      ++fit.clamped;
    }
    xs[i] = std::log10(checkpoints[i]);
    ys[i] = std::log10(g);
  }

  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0)
    throw std::invalid_argument("fit_rate: degenerate checkpoints");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean_y = sy / n;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double pred = fit.intercept + fit.slope * xs[i];
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r_squared = ss_tot > 1e-30 ? 1.0 - ss_res / ss_tot
                                 : (ss_res < 1e-30 ? 1.0 : 0.0);
  return fit;
}

TradeoffReport report_tradeoff(double epsilon, double eps_q_bar, double sigma,
                               double bound_m, double domain_radius,
                               int workers, double bits_per_iteration) {
  if (!(epsilon > 0.0) || eps_q_bar < 0.0 || sigma < 0.0 || !(bound_m > 0.0) ||
      !(domain_radius > 0.0) || workers < 1)
    throw std::invalid_argument("report_tradeoff: missing or bad parameters");
  TradeoffReport report;
  const double noise = eps_q_bar * bound_m * bound_m + sigma * sigma;
  const double d2 = domain_radius * domain_radius;
  report.iterations_needed = noise * noise * d2 * d2 / (epsilon * epsilon);
  report.bits_per_iteration = bits_per_iteration;
  report.total_bits_estimate =
      report.iterations_needed * bits_per_iteration * workers;
  return report;
}

}  // namespace qgenx
