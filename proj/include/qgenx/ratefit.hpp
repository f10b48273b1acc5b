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

#ifndef QGENX_RATEFIT_HPP
#define QGENX_RATEFIT_HPP

#include <vector>

namespace qgenx {

// Least squares on (log T, log gap). Gaps below 1e-14 are clamped to the
// floor and flagged rather than dropped.
struct RateFit {
  std::vector<double> checkpoints;
  std::vector<double> gaps;
  double slope = 0.0;
  double intercept = 0.0;  // log10 units
  double r_squared = 0.0;
  int clamped = 0;
};

RateFit fit_rate(const std::vector<double>& checkpoints,
                 const std::vector<double>& gaps);

// Iteration / communication projections from the convergence and
// code-length bounds; these are bound-derived, not measurements.
struct TradeoffReport {
  double iterations_needed = 0.0;      // T(eps, eps_Q-bar)
  double bits_per_iteration = 0.0;     // per worker, expected bound
  double total_bits_estimate = 0.0;    // across K workers
};

// T(eps) = (eps_q_bar * M^2 + sigma^2)^2 * D^4 / eps^2.
TradeoffReport report_tradeoff(double epsilon, double eps_q_bar, double sigma,
                               double bound_m, double domain_radius,
                               int workers, double bits_per_iteration);

}  // namespace qgenx

#endif  // QGENX_RATEFIT_HPP
