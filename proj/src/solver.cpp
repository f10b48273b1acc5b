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

#include "qgenx/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace qgenx {

double adaptive_stepsize(double step_accumulator, int workers) {
  if (step_accumulator < 0.0)
    throw std::invalid_argument("adaptive_stepsize: negative accumulator");
  if (workers < 1)
    throw std::invalid_argument("adaptive_stepsize: workers must be >= 1");
  return static_cast<double>(workers) / std::sqrt(1.0 + step_accumulator);
}

SolverState::SolverState(int dim, int workers, Variant variant)
    : dim_(dim), workers_(workers), variant_(variant) {
  if (dim < 1 || workers < 1)
    throw std::invalid_argument("SolverState: bad dimensions");
  x_ = Vec::Zero(dim);
  y_ = Vec::Zero(dim);
  x_half_ = Vec::Zero(dim);
  prev_half_.assign(workers, Vec::Zero(dim));
}

SolverState SolverState::resume(int dim, int workers, Variant variant, Vec x,
                                Vec y, double step_accumulator,
                                long iteration) {
  SolverState state(dim, workers, variant);
  state.step_acc_ = step_accumulator;
  const double gamma = state.stepsize();
  if (((x - gamma * y).norm()) > 1e-9 * (1.0 + x.norm()))
    throw std::invalid_argument("SolverState: x must equal stepsize() * y");
  state.x_ = std::move(x);
  state.y_ = std::move(y);
  state.iteration_ = iteration;
  return state;
}

double SolverState::stepsize() const {
  return adaptive_stepsize(step_acc_, workers_);
}

void SolverState::check_duals(const std::vector<Vec>& duals) const {
  if (static_cast<int>(duals.size()) != workers_)
    throw std::invalid_argument("SolverState: expected one dual per worker");
  for (const Vec& v : duals) {
    if (v.size() != dim_)
      throw std::invalid_argument("SolverState: dual dimension mismatch");
    if (!v.allFinite())
      throw std::invalid_argument("SolverState: non-finite dual vector");
  }
}

const Vec& SolverState::begin_step(const std::vector<Vec>& first_phase) {
  if (mid_step_) throw std::logic_error("SolverState: begin_step called twice");
  check_duals(first_phase);
  first_phase_ = first_phase;
  Vec sum = Vec::Zero(dim_);
  for (const Vec& v : first_phase) sum += v;
  x_half_ = x_ - (stepsize() / workers_) * sum;
  mid_step_ = true;
  return x_half_;
}

void SolverState::finish_step(const std::vector<Vec>& half_phase) {
  if (!mid_step_)
    throw std::logic_error("SolverState: finish_step without begin_step");
  check_duals(half_phase);
  Vec sum = Vec::Zero(dim_);
  for (const Vec& v : half_phase) sum += v;
  y_ -= sum / workers_;
  for (int k = 0; k < workers_; ++k)
    step_acc_ += (first_phase_[k] - half_phase[k]).squaredNorm();
  x_ = stepsize() * y_;  // gamma_{t+1} now that S includes iteration t
  prev_half_ = half_phase;
  ++iteration_;
  mid_step_ = false;
}

Vec SolverState::previous_half_average() const {
  Vec avg = Vec::Zero(dim_);
  for (const Vec& v : prev_half_) avg += v;
  return avg / workers_;
}

SolverState step(SolverState state, const std::vector<Vec>& first_phase,
                 const std::vector<Vec>& half_phase) {
  state.begin_step(first_phase);
  state.finish_step(half_phase);
  return state;
}

Vec ergodic_average(const Trajectory& trajectory) {
  if (trajectory.half_iterates.empty())
    throw std::invalid_argument("ergodic_average: empty trajectory");
  Vec acc = Vec::Zero(trajectory.half_iterates.front().size());
  for (const Vec& x : trajectory.half_iterates) acc += x;
  return acc / static_cast<double>(trajectory.half_iterates.size());
}

void RunningMean::add(const Vec& x) {
  if (count_ == 0) {
    mean_ = x;
  } else {
    mean_ += (x - mean_) / static_cast<double>(count_ + 1);
  }
  ++count_;
}

const Vec& RunningMean::mean() const {
  if (count_ == 0) throw std::logic_error("RunningMean: empty");
  return mean_;
}

}  // namespace qgenx
