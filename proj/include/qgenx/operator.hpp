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

#ifndef QGENX_OPERATOR_HPP
#define QGENX_OPERATOR_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "qgenx/levels.hpp"
#include "qgenx/rng.hpp"

namespace qgenx {

enum class OperatorKind {
  affine_skew,
  affine_general,
  diagonal_strongly_monotone,
  custom,
};

// A(x) = matrix * x + offset.
struct AffineForm {
  Eigen::MatrixXd matrix;
  Vec offset;
};

// Monotone operator over R^d. Immutable after construction; evaluation is
// thread-safe.
class Operator {
 public:
  static Operator affine(Eigen::MatrixXd matrix, Vec offset, OperatorKind kind,
                         std::optional<double> cocoercivity = std::nullopt,
                         std::optional<Vec> solution = std::nullopt);
  static Operator custom(int dim, std::function<Vec(const Vec&)> apply,
                         std::optional<double> cocoercivity = std::nullopt,
                         std::optional<Vec> solution = std::nullopt);

  Vec operator()(const Vec& x) const;

  int dim() const { return dim_; }
  OperatorKind kind() const { return kind_; }
  const std::optional<AffineForm>& affine_form() const { return affine_; }
  const std::optional<double>& cocoercivity() const { return cocoercivity_; }
  const std::optional<Vec>& solution() const { return solution_; }

 private:
  Operator() = default;
  int dim_ = 0;
  OperatorKind kind_ = OperatorKind::custom;
  std::function<Vec(const Vec&)> apply_;
  std::optional<AffineForm> affine_;
  std::optional<double> cocoercivity_;
  std::optional<Vec> solution_;
};

// Euclidean ball test set for the restricted gap.
struct TestDomain {
  Vec center;
  double radius = 0.0;
};

enum class GapMethod {
  closed_form_linear,  // affine skew: linear objective over the ball
  trust_region_exact,  // affine: exact quadratic maximization over the ball
  multistart_pga,      // custom operators
};

struct GapResult {
  double value = 0.0;
  GapMethod method = GapMethod::multistart_pga;
};

// sup_{x in C} <A(x), candidate - x>. Affine operators are solved exactly
// (skew reduces to a linear objective, otherwise a trust-region
// subproblem); custom operators fall back to projected gradient ascent with
// 16 starts, 500 steps of size 0.1 * radius.
GapResult restricted_gap(const Operator& op, const Vec& candidate,
                         const TestDomain& domain);

// Worst sampled violation of <A(x)-A(y), x-y> >= 0 over `trials` random
// pairs in the unit ball around the origin; <= 0 means no violation seen.
double sample_monotonicity_violation(const Operator& op, int trials,
                                     RngStream& rng);

}  // namespace qgenx

#endif  // QGENX_OPERATOR_HPP
