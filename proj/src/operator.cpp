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

#include "qgenx/operator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qgenx {

Operator Operator::affine(Eigen::MatrixXd matrix, Vec offset, OperatorKind kind,
                          std::optional<double> cocoercivity,
                          std::optional<Vec> solution) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != offset.size())
    throw std::invalid_argument("Operator: inconsistent affine dimensions");
  Operator op;
  op.dim_ = static_cast<int>(matrix.rows());
  op.kind_ = kind;
  op.affine_ = AffineForm{std::move(matrix), std::move(offset)};
  op.cocoercivity_ = cocoercivity;
  op.solution_ = std::move(solution);
  return op;
}

Operator Operator::custom(int dim, std::function<Vec(const Vec&)> apply,
                          std::optional<double> cocoercivity,
                          std::optional<Vec> solution) {
  if (dim < 1) throw std::invalid_argument("Operator: dim must be >= 1");
  Operator op;
  op.dim_ = dim;
  op.kind_ = OperatorKind::custom;
  op.apply_ = std::move(apply);
  op.cocoercivity_ = cocoercivity;
  op.solution_ = std::move(solution);
  return op;
}

Vec Operator::operator()(const Vec& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("Operator: dimension mismatch");
  Vec out = affine_ ? Vec(affine_->matrix * x + affine_->offset) : apply_(x);
  if (!out.allFinite())
    throw std::runtime_error("Operator: non-finite output");
  return out;
}

namespace {

// max over ||z|| <= radius of -z'Sz + w'z, S symmetric, via the standard
// eigen-decomposition treatment of the trust-region subproblem (including
// the hard case).
double max_quadratic_over_ball(const Eigen::MatrixXd& S, const Vec& w,
                               double radius) {
  const auto psi = [&](const Vec& z) { return -z.dot(S * z) + w.dot(z); };
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(S);
  const Vec lam = eig.eigenvalues();
  const Eigen::MatrixXd& V = eig.eigenvectors();
  const Vec wt = V.transpose() * w;
  const double lam_min = lam.minCoeff();

  // z(mu)_i = wt_i / (2 lam_i + 2 mu) in the eigenbasis; valid for
  // mu > max(0, -lam_min).
  const auto norm_sq_at = [&](double mu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      const double denom = 2.0 * (lam[i] + mu);
      acc += (wt[i] * wt[i]) / (denom * denom);
    }
    return acc;
  };
  const auto z_at = [&](double mu) {
    Vec zt(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      zt[i] = wt[i] / (2.0 * (lam[i] + mu));
    return Vec(V * zt);
  };

  const double r_sq = radius * radius;
  if (lam_min > 0.0 && norm_sq_at(0.0) <= r_sq) return psi(z_at(0.0));

  const double mu_low = std::max(0.0, -lam_min);
  // Hard case: no component of w along the bottom eigenspace, interior
  // stationary point short of the boundary. Pad with that eigenvector.
  double bottom_w_sq = 0.0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] - lam_min < 1e-12 * std::max(1.0, std::abs(lam_min)))
      bottom_w_sq += wt[i] * wt[i];
  if (bottom_w_sq < 1e-28) {
    Vec zt = Vec::Zero(lam.size());
    int bottom_index = 0;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
      if (lam[i] - lam_min < 1e-12 * std::max(1.0, std::abs(lam_min))) {
        bottom_index = static_cast<int>(i);
        continue;
      }
      zt[i] = wt[i] / (2.0 * (lam[i] + mu_low));
    }
    const double inner_sq = zt.squaredNorm();
    if (inner_sq <= r_sq) {
      zt[bottom_index] = std::sqrt(r_sq - inner_sq);
      return psi(Vec(V * zt));
    }
  }

  double lo = mu_low;
  double hi = std::max(mu_low * 2.0, mu_low + w.norm() / (2.0 * radius) + 1.0);
  while (norm_sq_at(hi) > r_sq) hi = 2.0 * hi + 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= mu_low || norm_sq_at(mid) > r_sq)
      lo = mid;
    else
      hi = mid;
  }
  return psi(z_at(hi));
}

double gap_affine(const AffineForm& form, const Vec& candidate,
                  const TestDomain& domain, bool skew) {
  // <A(x), xh - x> = z'(r - 2 S c) - z'Sz + [c'r - c'Sc + b'xh], x = c + z.
  const Eigen::MatrixXd& M = form.matrix;
  const Vec r = M.transpose() * candidate - form.offset;
  const double base = domain.center.dot(r) + form.offset.dot(candidate);
  if (skew) return base + domain.radius * r.norm();
  const Eigen::MatrixXd S = 0.5 * (M + M.transpose());
  const Vec w = r - 2.0 * (S * domain.center);
  const double c_quad = domain.center.dot(S * domain.center);
  return base - c_quad + max_quadratic_over_ball(S, w, domain.radius);
}

Vec project_to_ball(const Vec& x, const TestDomain& domain) {
  const Vec delta = x - domain.center;
  const double n = delta.norm();
  if (n <= domain.radius) return x;
  return domain.center + delta * (domain.radius / n);
}

double gap_multistart_pga(const Operator& op, const Vec& candidate,
                          const TestDomain& domain) {
  constexpr int kStarts = 16;
  constexpr int kSteps = 500;
  const double step = 0.1 * domain.radius;
  const double h = 1e-5 * std::max(1.0, domain.radius);
  const auto objective = [&](const Vec& x) { return op(x).dot(candidate - x); };

  RngStream rng(0x9a7f0c2d5u);
  double best = -std::numeric_limits<double>::infinity();
  for (int start = 0; start < kStarts; ++start) {
    Vec x;
    if (start == 0) {
      x = domain.center;
    } else if (start == 1) {
      x = project_to_ball(candidate, domain);
    } else {
      x = domain.center;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] += domain.radius * (2.0 * rng.next_double() - 1.0);
      x = project_to_ball(x, domain);
    }
    for (int it = 0; it < kSteps; ++it) {
      Vec grad(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        grad[i] = (objective(xp) - objective(xm)) / (2.0 * h);
      }
      x = project_to_ball(x + step * grad, domain);
    }
    best = std::max(best, objective(x));
  }
  return best;
}

}  // namespace

GapResult restricted_gap(const Operator& op, const Vec& candidate,
                         const TestDomain& domain) {
  if (candidate.size() != op.dim())
    throw std::invalid_argument("restricted_gap: candidate dimension mismatch");
  if (domain.center.size() != op.dim() || !(domain.radius > 0.0) ||
      !domain.center.allFinite())
    throw std::invalid_argument("restricted_gap: invalid domain");

  GapResult result;
  if (op.affine_form()) {
    const bool skew = op.kind() == OperatorKind::affine_skew;
    result.method =
        skew ? GapMethod::closed_form_linear : GapMethod::trust_region_exact;
    result.value = gap_affine(*op.affine_form(), candidate, domain, skew);
  } else {
    result.method = GapMethod::multistart_pga;
    result.value = gap_multistart_pga(op, candidate, domain);
  }
  return result;
}

double sample_monotonicity_violation(const Operator& op, int trials,
                                     RngStream& rng) {
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Vec x(op.dim()), y(op.dim());
    for (int i = 0; i < op.dim(); ++i) {
      x[i] = 2.0 * rng.next_double() - 1.0;
      y[i] = 2.0 * rng.next_double() - 1.0;
    }
    const double inner = (op(x) - op(y)).dot(x - y);
    worst = std::min(worst, inner);
  }
  return -worst;
}

}  // namespace qgenx
