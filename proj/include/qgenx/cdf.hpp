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

#ifndef QGENX_CDF_HPP
#define QGENX_CDF_HPP

#include <vector>

#include "qgenx/levels.hpp"

namespace qgenx {

enum class CdfModel { empirical, log_normal };
enum class LevelOptMethod { coordinate, gradient };

// Norm-weighted mixture CDF of normalized coordinate magnitudes on [0, 1].
// Backed by a histogram with uniform density inside each bin, so F is
// piecewise linear, F(0) = 0, F(1) = 1, and the partial moments needed by
// the level optimizer are exact.
class CoordinateCDF {
 public:
  CoordinateCDF(Eigen::VectorXd bin_mass, std::vector<double> mixture_weights,
                std::vector<double> sample_norms);

  // Exact U[0, 1]: equal mass per bin.
  static CoordinateCDF uniform(int bins = 1024);

  double value(double u) const;                     // F(u)
  double mass(double a, double b) const;            // integral of dF over [a,b]
  double first_moment(double a, double b) const;    // integral of u dF
  double second_moment(double a, double b) const;   // integral of u^2 dF

  int bins() const { return static_cast<int>(bin_mass_.size()); }
  const Eigen::VectorXd& bin_mass() const { return bin_mass_; }
  const std::vector<double>& mixture_weights() const { return mixture_weights_; }
  const std::vector<double>& sample_norms() const { return sample_norms_; }

 private:
  Eigen::VectorXd bin_mass_;   // sums to 1
  Eigen::VectorXd cum_mass_;   // prefix sums, size bins + 1
  std::vector<double> mixture_weights_;
  std::vector<double> sample_norms_;
};

// Builds the mixture F = sum_j lambda_j F_j from dual-vector samples, with
// lambda_j = ||g_j||_q^2 / sum ||g_j||_q^2 and F_j the empirical CDF of the
// normalized coordinates of sample j. Zero samples carry no weight; all-zero
// input is an error. The log_normal model fits log|u| by moment matching
// (zero coordinates keep an atom at 0) and is discretized onto the same
// histogram.
CoordinateCDF estimate_cdf(const std::vector<Vec>& samples, NormOrder q,
                           int bins = 1024, CdfModel model = CdfModel::empirical);

// F-weighted quantization variance sum_i integral_{l_i}^{l_{i+1}}
// (l_{i+1}-u)(u-l_i) dF(u); the objective minimized by optimize_levels.
double quantization_objective(const CoordinateCDF& cdf,
                              const LevelSchedule& schedule);

// Minimizes the objective over inner levels. The coordinate method solves
// the per-level first-order condition by bisection and sweeps until the
// objective improves by < 1e-8 (at most 100 sweeps); the gradient method
// runs 500 projected-gradient steps with backtracking. Both return a grid
// no worse than uniform levels and enforce a minimum inter-level gap of
// 1e-6.
LevelSchedule optimize_levels(const CoordinateCDF& cdf, int s,
                              LevelOptMethod method, NormOrder q,
                              int new_version = 0);

// Symbol occurrence probabilities p_0..p_{s+1} under F: mass each
// coordinate rounds onto each level. Sums to 1.
Eigen::VectorXd level_weights(const CoordinateCDF& cdf,
                              const LevelSchedule& schedule);

}  // namespace qgenx

#endif  // QGENX_CDF_HPP
