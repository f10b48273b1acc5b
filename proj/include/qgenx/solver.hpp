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

#ifndef QGENX_SOLVER_HPP
#define QGENX_SOLVER_HPP

#include <vector>

#include "qgenx/levels.hpp"

namespace qgenx {

enum class Variant { da, de, optda };

// Step size K (1 + S)^{-1/2}; S accumulates sum_k ||V_t - V_{t+1/2}||^2
// over past iterations, so no noise-profile knowledge is needed.
double adaptive_stepsize(double step_accumulator, int workers);

// State of the two-phase recursion
//   X_{t+1/2} = X_t - (gamma_t / K) sum_k V_{k,t}
//   Y_{t+1}   = Y_t - (1 / K) sum_k V_{k,t+1/2}
//   X_{t+1}   = gamma_{t+1} Y_{t+1}
// started at Y_1 = 0 (hence X_1 = 0). The solver only consumes dual
// vectors; oracles and codecs are composed outside.
class SolverState {
 public:
  SolverState(int dim, int workers, Variant variant);

  // Restart from a checkpoint; x must satisfy x = stepsize() * y.
  static SolverState resume(int dim, int workers, Variant variant, Vec x,
                            Vec y, double step_accumulator, long iteration);

  // Phase one: consumes the first-phase duals and exposes X_{t+1/2}.
  const Vec& begin_step(const std::vector<Vec>& first_phase);
  // Phase two: consumes the half-step duals and completes the iteration.
  void finish_step(const std::vector<Vec>& half_phase);

  // For the optimistic variant: last iteration's half-step duals, zeros at
  // t = 1 where no half-step query exists yet.
  const std::vector<Vec>& previous_half_duals() const { return prev_half_; }
  Vec previous_half_average() const;

  const Vec& x() const { return x_; }
  const Vec& y() const { return y_; }
  const Vec& x_half() const { return x_half_; }
  double step_accumulator() const { return step_acc_; }
  double stepsize() const;  // gamma_t for the current iteration
  long iteration() const { return iteration_; }
  Variant variant() const { return variant_; }
  int workers() const { return workers_; }
  int dim() const { return dim_; }

 private:
  void check_duals(const std::vector<Vec>& duals) const;

  int dim_;
  int workers_;
  Variant variant_;
  Vec x_, y_, x_half_;
  std::vector<Vec> first_phase_;  // retained between the two phases
  std::vector<Vec> prev_half_;
  double step_acc_ = 0.0;
  long iteration_ = 1;
  bool mid_step_ = false;
};

// One full iteration; returns the advanced state.
SolverState step(SolverState state, const std::vector<Vec>& first_phase,
                 const std::vector<Vec>& half_phase);

struct Trajectory {
  std::vector<Vec> half_iterates;
  std::vector<double> gaps;            // optional, per checkpoint
  std::vector<long> bits_per_iteration;
};

// (1/T) sum_t X_{t+1/2} over what was recorded.
Vec ergodic_average(const Trajectory& trajectory);

// Incremental running mean with the same contract, for long runs.
class RunningMean {
 public:
  void add(const Vec& x);
  const Vec& mean() const;
  long count() const { return count_; }

 private:
  Vec mean_;
  long count_ = 0;
};

}  // namespace qgenx

#endif  // QGENX_SOLVER_HPP
